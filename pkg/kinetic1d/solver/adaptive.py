"""
Automatically growing window for non-periodic runs.

After every accepted step the density is inspected at sentinel knots placed one
kernel reach inside each edge. Once it is no longer negligible there, the window
doubles: h stays fixed, N doubles, the old values keep their coordinates and the
new knots are filled the way the boundary mode describes the outside (0 for
dirichlet, the edge value for asymptotic).

On an asymptotic side next to a dirichlet one the far field is compared with a
homogeneous companion density, the solution of the flat problem, advanced with
the same scheme as the main run.
"""

import logging
from dataclasses import dataclass, replace

import numpy as np

from ..errors import ConfigurationError, ResourceLimitError
from ..model.grid import BoundaryMode, Grid, QuadratureRule
from ..model.kernels import KernelSpec, truncation_radius
from ..model.state import DensityField, SolverState
from .config import AdaptiveConfig, CompanionMode
from .rhs import RateFunction, build_workspace, make_rate_function
from .stepper import StepperKind, advance_values

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HomogeneousCompanion:
    """
    Density of the spatially flat problem dn/dt = -mu_b n^2.

    Attributes:
        n_h: current companion density
        mu_b: decay coefficient; the discrete one for rk_tracked runs
        mode: closed form or integrated with the main scheme
        t: time the companion refers to
        anchor_n: density at anchor_t, the start of the closed form
        anchor_t: time the closed form starts from
    """

    n_h: float
    mu_b: float
    mode: CompanionMode = CompanionMode.RK_TRACKED
    t: float = 0.0
    anchor_n: float | None = None
    anchor_t: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "mode", CompanionMode(self.mode))
        if self.anchor_n is None:
            object.__setattr__(self, "anchor_n", self.n_h)
            object.__setattr__(self, "anchor_t", self.t)

    def reanchored(self, n_h: float) -> "HomogeneousCompanion":
        return replace(self, n_h=n_h, anchor_n=n_h, anchor_t=self.t)


def start_companion(
    n0: float, mu_b: float, mode: CompanionMode | str = CompanionMode.RK_TRACKED, t: float = 0.0
) -> HomogeneousCompanion:
    mode = CompanionMode(mode)
    if mode is CompanionMode.ANALYTIC and mu_b > 0:
        logger.warning(
            "Analytic companion uses the kernel mass and ignores quadrature error; "
            "edge drift may trigger extra growth. rk_tracked avoids this"
        )
    return HomogeneousCompanion(n_h=float(n0), mu_b=float(mu_b), mode=mode, t=t)


def companion_advance(
    companion: HomogeneousCompanion, dt: float, kind: StepperKind | str = StepperKind.RK4
) -> HomogeneousCompanion:
    """Move the companion forward by dt."""
    t = companion.t + dt
    mu = companion.mu_b
    if companion.mode is CompanionMode.ANALYTIC:
        n0 = companion.anchor_n
        n_h = n0 / (1.0 + mu * n0 * (t - companion.anchor_t))
    else:
        values = advance_values(np.array([companion.n_h]), lambda v: -mu * v * v, dt, kind)
        n_h = float(values[0])
    return replace(companion, n_h=n_h, t=t)


@dataclass(frozen=True)
class BreachReport:
    """Which sides of the window need room."""

    left: bool = False
    right: bool = False
    edge_drift: bool = False

    @property
    def any(self) -> bool:
        return self.left or self.right


def sentinel_indices(grid: Grid, reach: float) -> tuple[int, int]:
    """1-based knots nearest to x_B = edges moved inwards by the kernel reach."""
    return grid.index_of(grid.left_edge + reach), grid.index_of(grid.right_edge - reach)


def breach_check(state: SolverState, cfg: AdaptiveConfig, reach: float) -> BreachReport:
    """
    Flag every side whose sentinel sees more than epsilon * max n.

    A dirichlet side breaches when n(x_B) exceeds the threshold. An asymptotic
    side breaches when the far field is no longer flat: measured against the
    companion when there is one (both n_1 and n(x_B)), against the edge value
    otherwise.
    """
    mode = state.boundary
    if mode is BoundaryMode.PERIODIC:
        return BreachReport()

    n = state.field.values
    threshold = cfg.epsilon * float(n.max())
    left_i, right_i = sentinel_indices(state.grid, reach)
    edge_drift = False

    def asymptotic(edge: float, sentinel: float) -> bool:
        nonlocal edge_drift
        if state.companion is None:
            return abs(sentinel - edge) > threshold
        level = state.companion.n_h
        drift = abs(edge - level) > threshold
        edge_drift = edge_drift or drift
        return drift or abs(sentinel - level) > threshold

    if mode.left is BoundaryMode.DIRICHLET:
        left = n[left_i - 1] > threshold
    else:
        left = asymptotic(n[0], n[left_i - 1])

    if mode.right is BoundaryMode.DIRICHLET:
        right = n[right_i - 1] > threshold
    else:
        right = asymptotic(n[-1], n[right_i - 1])

    return BreachReport(left=bool(left), right=bool(right), edge_drift=edge_drift)


def _fill(side: BoundaryMode, edge_value: float, count: int) -> np.ndarray:
    if side is BoundaryMode.DIRICHLET:
        return np.zeros(count)
    return np.full(count, edge_value)


def enlarge(state: SolverState, report: BreachReport, cfg: AdaptiveConfig) -> SolverState:
    """
    Double the window at fixed h.

    Both sides breached: N/2 new knots on each side. One side: N new knots on
    that side only, and the centre moves by L/2 towards it.
    """
    if not report.any:
        return state

    grid = state.grid
    size = grid.knots
    grown = size * AdaptiveConfig.GROWTH_FACTOR
    if grown > cfg.max_knots:
        raise ResourceLimitError(
            f"Adaptive window would grow to N={grown} beyond max_n={cfg.max_knots} "
            f"(L={2 * grid.length:g}); raise max_n in [adaptive] or start from a larger L"
        )

    n = state.field.values
    mode = state.boundary
    if report.left and report.right:
        left_count, right_count, center = size // 2, size // 2, grid.center
    elif report.left:
        left_count, right_count, center = size, 0, grid.center - grid.length / 2
    else:
        left_count, right_count, center = 0, size, grid.center + grid.length / 2

    values = np.concatenate(
        [_fill(mode.left, n[0], left_count), n, _fill(mode.right, n[-1], right_count)]
    )
    new_grid = Grid(length=2 * grid.length, knots=grown, center=center)
    logger.info(
        "t=%g: window grows %s to L=%g, N=%d",
        state.t,
        "both sides" if left_count and right_count else ("left" if left_count else "right"),
        new_grid.length,
        grown,
    )
    return replace(state, field=DensityField(grid=new_grid, values=values))


class AdaptiveMonitor:
    """
    Watches a run and grows its window.

    Keeps the companion in step with the main state, checks the sentinels after
    every accepted step and rebuilds the rate function whenever the grid changes.
    """

    def __init__(
        self,
        cfg: AdaptiveConfig,
        a_spec: KernelSpec,
        b_spec: KernelSpec,
        phi_spec: KernelSpec,
        rule: QuadratureRule,
        dt: float,
        kind: StepperKind,
    ):
        self.cfg = cfg
        self.specs = (a_spec, b_spec, phi_spec)
        self.rule = QuadratureRule(rule)
        self.dt = dt
        self.kind = StepperKind(kind)
        self.reach = max(truncation_radius(spec) for spec in self.specs)
        self.enlargements: list[tuple[float, float, int]] = []

    def check_start(self, state: SolverState) -> None:
        if state.boundary is BoundaryMode.PERIODIC:
            raise ConfigurationError(
                "Adaptive window needs dirichlet or asymptotic boundaries; "
                "a periodic domain is part of the model"
            )
        if state.grid.knots > self.cfg.max_knots:
            raise ConfigurationError(
                f"Initial N={state.grid.knots} already exceeds max_n={self.cfg.max_knots}"
            )

    def after_step(self, state: SolverState) -> SolverState:
        if state.companion is not None:
            state = replace(state, companion=companion_advance(state.companion, self.dt, self.kind))

        report = breach_check(state, self.cfg, self.reach)
        if not report.any:
            return state

        state = enlarge(state, report, self.cfg)
        self.enlargements.append((state.t, state.grid.length, state.grid.knots))
        if report.edge_drift and state.companion is not None:
            logger.warning(
                "t=%g: edge density %.17g left the companion %.17g before the sentinel did; "
                "companion re-anchored to the edge value",
                state.t,
                state.field.values[0],
                state.companion.n_h,
            )
            state = replace(state, companion=state.companion.reanchored(state.field.values[0]))
        return state

    def rate_function(self, state: SolverState) -> RateFunction:
        workspace = build_workspace(*self.specs, state.grid, self.rule)
        return make_rate_function(workspace, state.boundary)
