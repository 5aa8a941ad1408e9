import math

import numpy as np
import pytest

from kinetic1d.analysis.diagnostics import fit_loglog_slope, homogeneous_solution
from kinetic1d.errors import DivergenceError, ObserverError
from kinetic1d.model.grid import BoundaryMode, build_grid
from kinetic1d.model.initial import ConstantIC, sample_initial
from kinetic1d.model.kernels import KernelSpec
from kinetic1d.model.state import SolverState
from kinetic1d.solver.config import IntegrationConfig
from kinetic1d.solver.rhs import build_workspace, coalescence_coefficient, make_rate_function
from kinetic1d.solver.stepper import (
    StepperKind,
    advance_values,
    count_evaluations,
    integrate,
    step,
)
from tests.conftest import gauss


def decay(values):
    return -values


def _decay_error(dt: float, kind: StepperKind) -> float:
    values = np.array([1.0])
    for p in range(round(1.0 / dt)):
        values = advance_values(values, decay, dt, kind, p)
    return abs(values[0] - math.exp(-1.0))


@pytest.fixture
def state():
    grid = build_grid(10.0, 20)
    return SolverState(
        t=0.0, field=sample_initial(ConstantIC(n0=1.0), grid), boundary=BoundaryMode.PERIODIC
    )


@pytest.mark.parametrize("kind", list(StepperKind))
def test_stage_count(kind):
    rate = count_evaluations(decay)
    advance_values(np.ones(3), rate, 0.1, kind)
    assert rate.calls == kind.stages


@pytest.mark.parametrize("kind", list(StepperKind))
def test_convergence_order(kind):
    points = [(dt, _decay_error(dt, kind)) for dt in (0.1, 0.05, 0.025)]
    assert fit_loglog_slope(points) == pytest.approx(kind.order, abs=0.2)


def test_one_rk4_step_of_linear_decay():
    result = advance_values(np.array([1.0]), decay, 0.1, StepperKind.RK4)
    taylor = 1 - 0.1 + 0.1**2 / 2 - 0.1**3 / 6 + 0.1**4 / 24
    assert result[0] == pytest.approx(taylor, rel=1e-14)


def test_non_finite_stage_raises_with_step_and_stage():
    def explode(values):
        return np.full_like(values, np.inf)

    with pytest.raises(DivergenceError) as info:
        advance_values(np.ones(3), explode, 0.1, StepperKind.RK4, step_index=7, t=0.6)
    assert info.value.step_index == 7
    assert info.value.t == 0.6
    assert info.value.stage == 1


def test_step_returns_a_new_state(state):
    later = step(state, decay, 0.1)
    assert later is not state
    assert later.t == pytest.approx(0.1)
    np.testing.assert_array_equal(state.field.values, 1.0)


def test_time_is_never_accumulated(state):
    record = integrate(state, decay, IntegrationConfig(dt=0.1, t_end=100.0))
    assert record.steps == 1000
    assert record.final.t == 0.0 + 1000 * 0.1


def test_snapshots_fire_at_requested_times(state):
    seen = []
    cfg = IntegrationConfig(dt=0.1, t_end=1.0, snapshot_times=(0.0, 0.5, 1.0))
    record = integrate(state, decay, cfg, observers=[lambda s: seen.append(s.t)])
    assert seen == pytest.approx([0.0, 0.5, 1.0])
    assert [s.t for s in record.snapshots] == seen


def test_observer_failure_aborts_the_run(state):
    def broken(_):
        raise RuntimeError("disk full")

    cfg = IntegrationConfig(dt=0.1, t_end=1.0, snapshot_times=(0.5,))
    with pytest.raises(ObserverError, match="disk full"):
        integrate(state, decay, cfg, observers=[broken])


def test_progress_is_reported_every_step(state):
    ticks = []
    cfg = IntegrationConfig(dt=0.1, t_end=1.0)
    integrate(state, decay, cfg, progress_callback=lambda: ticks.append(1))
    assert len(ticks) == 10


def test_flat_coalescence_matches_the_closed_form():
    grid = build_grid(20.0, 400)
    ws = build_workspace(KernelSpec(), gauss(1.0), KernelSpec(), grid)
    rate = make_rate_function(ws, BoundaryMode.PERIODIC)
    initial = SolverState(
        t=0.0, field=sample_initial(ConstantIC(n0=1.0), grid), boundary=BoundaryMode.PERIODIC
    )
    record = integrate(initial, rate, IntegrationConfig(dt=0.1, t_end=50.0))
    mu = coalescence_coefficient(ws)
    values = record.final.field.values
    np.testing.assert_allclose(values, homogeneous_solution(1.0, mu, 50.0), rtol=0, atol=1e-8)
    assert values[0] == pytest.approx(1.0 / 51.0, abs=1e-8)
