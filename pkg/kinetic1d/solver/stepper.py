"""
Fixed-step Runge-Kutta integration of the knot densities.

Three explicit schemes are available: the classical fourth-order method and
two second-order ones (Heun and the midpoint rule). Time advances as
t = t0 + p dt so that long runs do not accumulate rounding in t.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional, Protocol, Sequence

import numpy as np

from ..errors import DivergenceError, KineticError, ObserverError
from ..model.state import SolverState
from .config import IntegrationConfig
from .rhs import RateFunction

logger = logging.getLogger(__name__)

Observer = Callable[[SolverState], None]


class StepperKind(str, Enum):
    """The explicit schemes a run can use."""

    RK4 = "rk4"
    RK2_HEUN = "rk2_heun"
    RK2_MIDPOINT = "rk2_midpoint"

    @property
    def stages(self) -> int:
        return 4 if self is StepperKind.RK4 else 2

    @property
    def order(self) -> int:
        return 4 if self is StepperKind.RK4 else 2


class CountingRate:
    """A rate function that remembers how many times it was called."""

    def __init__(self, rate: RateFunction):
        self.rate = rate
        self.calls = 0

    def __call__(self, values: np.ndarray) -> np.ndarray:
        self.calls += 1
        return self.rate(values)


def count_evaluations(rate: RateFunction) -> CountingRate:
    return CountingRate(rate)


def _checked(rate: RateFunction, values: np.ndarray, stage: int, step_index: int, t: float):
    phi = np.asarray(rate(values), dtype=float)
    if not np.all(np.isfinite(phi)):
        raise DivergenceError(step_index, t, stage)
    return phi


def advance_values(
    values: np.ndarray,
    rate: RateFunction,
    dt: float,
    kind: StepperKind,
    step_index: int = 0,
    t: float = 0.0,
) -> np.ndarray:
    """
    One step of the chosen scheme on a bare array of values.

    Raises DivergenceError when a stage rate or the result is not finite.
    """
    kind = StepperKind(kind)
    gamma = np.asarray(values, dtype=float)

    phi1 = _checked(rate, gamma, 1, step_index, t)
    if kind is StepperKind.RK4:
        phi2 = _checked(rate, gamma + phi1 * dt / 2, 2, step_index, t)
        phi3 = _checked(rate, gamma + phi2 * dt / 2, 3, step_index, t)
        phi4 = _checked(rate, gamma + phi3 * dt, 4, step_index, t)
        result = gamma + dt / 6 * (phi1 + 2 * phi2 + 2 * phi3 + phi4)
    elif kind is StepperKind.RK2_HEUN:
        phi2 = _checked(rate, gamma + phi1 * dt, 2, step_index, t)
        result = gamma + (phi1 + phi2) * dt / 2
    else:
        phi2 = _checked(rate, gamma + phi1 * dt / 2, 2, step_index, t)
        result = gamma + phi2 * dt

    if not np.all(np.isfinite(result)):
        raise DivergenceError(step_index, t)
    return result


def step(
    state: SolverState,
    rate: RateFunction,
    dt: float,
    kind: StepperKind | str = StepperKind.RK4,
    step_index: int = 0,
    t_next: float | None = None,
) -> SolverState:
    """Advance the state by dt; the returned state is a new object."""
    t_next = state.t + dt if t_next is None else t_next
    values = advance_values(state.field.values, rate, dt, StepperKind(kind), step_index, state.t)
    return state.advanced(t_next, values)


class DomainMonitor(Protocol):
    """Hook that may replace the state between steps, e.g. to grow the window."""

    def after_step(self, state: SolverState) -> SolverState: ...

    def rate_function(self, state: SolverState) -> RateFunction: ...


@dataclass
class RunRecord:
    """What a finished integration hands back."""

    final: SolverState
    snapshots: list[SolverState] = field(default_factory=list)
    steps: int = 0


def _notify(observers: Sequence[Observer], state: SolverState) -> None:
    for observer in observers:
        try:
            observer(state)
        except KineticError:
            raise
        except Exception as exc:
            raise ObserverError(f"Observer {observer!r} failed at t={state.t:g}: {exc}") from exc


def integrate(
    initial: SolverState,
    rate: RateFunction,
    cfg: IntegrationConfig,
    kind: StepperKind | str = StepperKind.RK4,
    observers: Sequence[Observer] = (),
    monitor: Optional[DomainMonitor] = None,
    progress_callback: Optional[Callable[[], None]] = None,
) -> RunRecord:
    """
    Repeat the step P = T/dt times, firing observers at the snapshot steps.

    A monitor, when given, sees every accepted state and may return a state on
    a different grid; the rate function is then rebuilt for it.
    """
    kind = StepperKind(kind)
    total = cfg.steps
    pending = cfg.snapshot_steps()
    t0 = initial.t
    state = initial
    record = RunRecord(final=initial)

    logger.debug("Integrating %d steps of dt=%g with %s", total, cfg.dt, kind.value)

    if pending and pending[0] == 0:
        pending.pop(0)
        record.snapshots.append(state)
        _notify(observers, state)

    for p in range(1, total + 1):
        state = step(state, rate, cfg.dt, kind, step_index=p, t_next=t0 + p * cfg.dt)
        if monitor is not None:
            grown = monitor.after_step(state)
            if grown.grid != state.grid:
                rate = monitor.rate_function(grown)
            state = grown

        if pending and pending[0] == p:
            pending.pop(0)
            record.snapshots.append(state)
            _notify(observers, state)

        record.final = state
        record.steps = p
        if progress_callback:
            progress_callback()

    return record
