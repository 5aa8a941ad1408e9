"""Full-length runs of the built-in scenarios."""

import math
from dataclasses import replace

import numpy as np
import pytest

from kinetic1d.analysis.diagnostics import (
    fit_loglog_slope,
    flat_limit,
    front_balance,
    symmetry_defect,
    total_mass,
)
from kinetic1d.analysis.harness import timing_sweep
from kinetic1d.model.grid import BoundaryMode, build_grid
from kinetic1d.model.initial import HeavisideIC
from kinetic1d.scenario.presets import get_preset, preset_names
from kinetic1d.solver.config import AdaptiveConfig, IntegrationConfig
from kinetic1d.solver.runner import Simulation

pytestmark = pytest.mark.slow


@pytest.mark.parametrize("name", preset_names())
def test_preset_runs_to_its_horizon(name, tmp_path):
    scenario = get_preset(name)
    result = Simulation(scenario, output_dir=tmp_path).run()
    assert result.status == "ok"
    assert result.final.t == pytest.approx(scenario.integration.t_end)
    assert np.all(np.isfinite(result.final.field.values))
    assert len(result.record.snapshots) == len(scenario.integration.snapshot_times)
    assert (tmp_path / "manifest.json").is_file()


def test_free_jumps_flatten_the_rectangle():
    scenario = get_preset("fig1a")
    result = Simulation(scenario).run()
    final = result.final.field
    start = result.record.snapshots[0].field
    assert total_mass(final) == pytest.approx(total_mass(start), rel=1e-12)
    assert np.max(np.abs(final.values - flat_limit(start))) < 1e-6


def test_repulsion_run_conserves_mass_and_symmetry():
    result = Simulation(get_preset("fig1b")).run()
    masses = [total_mass(s.field) for s in result.record.snapshots]
    assert masses == pytest.approx([masses[0]] * len(masses), rel=1e-11)
    assert result.final.t == pytest.approx(100.0)
    for snapshot in result.record.snapshots:
        assert symmetry_defect(snapshot.field) <= 1e-12


def test_coalescence_only_removes_particles():
    result = Simulation(get_preset("fig1d")).run()
    mass = result.series["mass"].to_numpy()
    assert np.all(np.diff(mass) <= 1e-12)
    assert mass[-1] < mass[0]
    for snapshot in result.record.snapshots:
        assert symmetry_defect(snapshot.field) <= 1e-12


def test_cosine_mode_decays_at_the_jump_rate():
    scenario = get_preset("fig4a")
    grid = scenario.grid
    k = 2 * math.pi * scenario.initial.k / grid.length
    decay = scenario.a.mu * (1.0 - math.exp(-((k * scenario.a.sigma) ** 2) / 2))
    cos = np.cos(k * grid.coordinates())

    for snapshot in Simulation(scenario).run().record.snapshots:
        if snapshot.t > 10:
            break
        values = snapshot.field.values
        amplitude = 2.0 / grid.knots * float(np.sum((values - values.mean()) * cos))
        assert amplitude == pytest.approx(math.exp(-decay * snapshot.t), rel=1e-4)


def test_step_front_keeps_its_particle_balance():
    result = Simulation(get_preset("fig5a")).run()
    assert result.enlargements
    assert abs(front_balance(result.final.field, 1.0)) < 1e-6


def test_fft_path_gets_relatively_cheaper_as_n_grows():
    knots = [2**p for p in range(8, 14)]
    frame, slopes = timing_sweep(get_preset("fig4a"), knots, repeats=5)
    ratio = frame["spectral"] / frame["direct"]
    assert ratio.iloc[-1] < ratio.iloc[0]
    assert slopes["spectral"] <= 1.3
    # small N is dominated by per-call overhead; the quadratic cost shows from 2**10 on
    large = frame[frame["N"] >= 2**10]
    assert fit_loglog_slope(zip(large["N"], large["direct"])) >= 1.7


def _common(first, second, half_width):
    """Values of two fields on the knots they share inside |x| <= half_width."""
    xa, xb = first.coordinates(), second.coordinates()
    lo = max(xa[0], xb[0], -half_width)
    hi = min(xa[-1], xb[-1], half_width)
    pick_a = (xa >= lo - 1e-9) & (xa <= hi + 1e-9)
    pick_b = (xb >= lo - 1e-9) & (xb <= hi + 1e-9)
    np.testing.assert_allclose(xa[pick_a], xb[pick_b], atol=1e-9)
    return first.values[pick_a], second.values[pick_b]


def test_growing_window_matches_a_wide_fixed_window():
    grown = Simulation(get_preset("fig5a")).run().record.snapshots
    wide_scenario = replace(
        get_preset("fig5a"), grid=build_grid(80.0, 800), adaptive=AdaptiveConfig()
    )
    wide = Simulation(wide_scenario).run().record.snapshots
    assert [s.t for s in grown] == [s.t for s in wide]
    for small, large in zip(grown, wide):
        a, b = _common(small.field, large.field, 20.0)
        assert np.max(np.abs(a - b)) <= 1e-8


def test_mirrored_step_gives_the_mirrored_solution():
    base = replace(
        get_preset("fig5b"),
        boundary=BoundaryMode.ASYMPTOTIC,
        grid=build_grid(60.0, 600),
        adaptive=AdaptiveConfig(),
        integration=IntegrationConfig(dt=0.1, t_end=10.0, snapshot_times=(0.0, 5.0, 10.0)),
    )
    mirrored = replace(base, initial=HeavisideIC(n0=1.0, mirrored=True))
    left = Simulation(base).run().record.snapshots
    right = Simulation(mirrored).run().record.snapshots
    for one, other in zip(left, right):
        np.testing.assert_allclose(one.field.values, other.field.values[::-1], atol=1e-12)


def test_shifted_coalescence_settles_down():
    result = Simulation(get_preset("fig3a")).run()
    series = result.series
    early = series.iloc[int((series["t"] - 10.0).abs().argmin())]
    assert series["mass"].iloc[-1] > 0.5 * series["mass"].iloc[0]
    assert early["t"] == pytest.approx(10.0)
    assert series["t"].iloc[-1] == pytest.approx(2000.0)
    assert 100.0 * series["max_abs_rhs"].iloc[-1] <= early["max_abs_rhs"]
