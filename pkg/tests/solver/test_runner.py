from dataclasses import replace

import numpy as np
import pytest

from kinetic1d.errors import DivergenceError
from kinetic1d.model.grid import BoundaryMode, QuadratureRule
from kinetic1d.model.initial import RectangleIC
from kinetic1d.scenario.scenario import OutputConfig, RhsPath
from kinetic1d.solver.output import read_manifest, read_series, read_snapshot
from kinetic1d.solver.runner import MANIFEST_FILE, SERIES_FILE, Simulation, build_rate_function
from kinetic1d.solver.stepper import count_evaluations
from tests.conftest import periodic_scenario


def test_periodic_run_conserves_mass(small_scenario):
    result = Simulation(small_scenario).run()
    mass = result.series["mass"].to_numpy()
    assert result.status == "ok"
    assert len(mass) == len(small_scenario.integration.snapshot_steps())
    np.testing.assert_allclose(mass, mass[0], rtol=1e-10)
    assert mass[0] == pytest.approx(1.0)


def test_series_costs_one_rate_evaluation_per_snapshot(small_scenario):
    simulation = Simulation(small_scenario)
    counted = {}

    def counting(grid):
        if grid not in counted:
            counted[grid] = count_evaluations(build_rate_function(small_scenario, grid))
        return counted[grid]

    simulation.rate_function = counting
    result = simulation.run()
    cfg = small_scenario.integration
    assert list(result.series["t"]) == pytest.approx([0.0, 1.0, 2.0])
    calls = sum(rate.calls for rate in counted.values())
    assert calls == cfg.steps * small_scenario.stepper.stages + len(result.series)


def test_series_every_step_when_asked(small_scenario):
    scenario = replace(small_scenario, output=OutputConfig(series_every=1))
    series = Simulation(scenario).run().series
    assert len(series) == scenario.integration.steps + 1


def test_run_writes_snapshots_series_and_manifest(tmp_path, small_scenario):
    result = Simulation(small_scenario, output_dir=tmp_path).run()
    snapshots = sorted(tmp_path.glob("snapshot_*.tsv"))
    assert len(snapshots) == 3
    field, t, meta = read_snapshot(snapshots[-1])
    assert t == pytest.approx(2.0)
    np.testing.assert_array_equal(field.values, np.maximum(result.final.field.values, 0.0))

    manifest = read_manifest(tmp_path / MANIFEST_FILE)
    assert manifest["status"] == "ok"
    assert manifest["steps_completed"] == 20
    assert manifest["scenario"]["integration"]["stepper"] == "rk4"
    assert manifest["scenario"]["integration"]["quadrature"] == "simpson"
    assert manifest["scenario_hash"] == meta["scenario"]
    assert manifest["snapshots"] == [p.name for p in snapshots]

    series = read_series(tmp_path / SERIES_FILE)
    assert series["t"].iloc[-1] == pytest.approx(2.0)


def test_reruns_are_bitwise_identical(tmp_path, small_scenario):
    Simulation(small_scenario, output_dir=tmp_path / "one").run()
    Simulation(small_scenario, output_dir=tmp_path / "two").run()
    names = sorted(p.name for p in (tmp_path / "one").iterdir())
    assert names == sorted(p.name for p in (tmp_path / "two").iterdir())
    for name in names:
        assert (tmp_path / "one" / name).read_bytes() == (tmp_path / "two" / name).read_bytes()


def test_divergence_flushes_partial_output(tmp_path, divergent_scenario):
    with pytest.raises(DivergenceError):
        Simulation(divergent_scenario, output_dir=tmp_path).run()
    manifest = read_manifest(tmp_path / MANIFEST_FILE)
    assert manifest["status"] == "diverged"
    assert manifest["failed_step"] >= 1
    assert manifest["snapshots"] == ["snapshot_000_t0.tsv"]
    assert (tmp_path / SERIES_FILE).exists()


def test_symmetric_profile_stays_symmetric(small_scenario):
    final = Simulation(small_scenario).run().final.field
    np.testing.assert_allclose(final.values, final.values[::-1], atol=1e-12)


def test_spectral_run_matches_direct_run_with_unit_weights(trig_scenario):
    direct = Simulation(replace(trig_scenario, quadrature=QuadratureRule.RIEMANN))
    spectral = Simulation(
        replace(trig_scenario, quadrature=QuadratureRule.RIEMANN, path=RhsPath.SPECTRAL)
    )
    a = direct.run().final.field.values
    b = spectral.run().final.field.values
    np.testing.assert_allclose(a, b, atol=1e-9)


def test_spectral_run_warns_about_discontinuous_profiles(caplog):
    scenario = periodic_scenario(path=RhsPath.SPECTRAL, initial=RectangleIC())
    Simulation(scenario).run()
    assert "discontinuous" in caplog.text


def test_rate_function_follows_the_path(small_scenario):
    values = np.ones(small_scenario.grid.knots)
    rate = build_rate_function(small_scenario, small_scenario.grid, RhsPath.SPECTRAL)
    np.testing.assert_allclose(rate(values), 0.0, atol=1e-12)
    assert small_scenario.boundary is BoundaryMode.PERIODIC
