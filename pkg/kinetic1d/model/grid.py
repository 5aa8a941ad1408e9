"""
Uniform grid, quadrature weight tables and boundary-condition index resolution.

The grid puts N knots at the midpoints of N equal cells on [-L/2, L/2]. With an
even N the knots are mirror images of each other around the centre, which is
what makes i <-> N+1-i an exact reflection pair.

Neighbours that fall outside 1..N are resolved by the boundary mode:

* periodic: wrap around once (kernels are truncated below L/2)
* dirichlet: nothing lives outside, the value is 0
* asymptotic: the profile is flat outside, the edge value repeats
* left_asymptotic_right_dirichlet: asymptotic on the left, dirichlet on the right
"""

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from ..errors import ContractError, ParameterError

logger = logging.getLogger(__name__)


class BoundaryMode(str, Enum):
    """How values beyond the first and last knot are supplied."""

    PERIODIC = "periodic"
    DIRICHLET = "dirichlet"
    ASYMPTOTIC = "asymptotic"
    LEFT_ASYMPTOTIC_RIGHT_DIRICHLET = "left_asymptotic_right_dirichlet"

    @property
    def left(self) -> "BoundaryMode":
        """The rule applied to spill on the left side."""
        if self is BoundaryMode.LEFT_ASYMPTOTIC_RIGHT_DIRICHLET:
            return BoundaryMode.ASYMPTOTIC
        return self

    @property
    def right(self) -> "BoundaryMode":
        """The rule applied to spill on the right side."""
        if self is BoundaryMode.LEFT_ASYMPTOTIC_RIGHT_DIRICHLET:
            return BoundaryMode.DIRICHLET
        return self


class QuadratureRule(str, Enum):
    """Composite rules for the truncated kernel sums."""

    TRAPEZOID = "trapezoid"
    SIMPSON = "simpson"
    RIEMANN = "riemann"


@dataclass(frozen=True)
class Grid:
    """
    Uniform knot layout over a window of length L.

    Knots sit at x_i = center - L/2 + (i - 1/2) h for i = 1..N with h = L/N.
    The centre is 0 unless the adaptive domain has grown one side only.
    """

    length: float
    knots: int
    center: float = 0.0

    def __post_init__(self):
        if not np.isfinite(self.length) or self.length <= 0:
            raise ParameterError(f"Domain length L must be > 0, got {self.length}")
        if int(self.knots) != self.knots or self.knots < 4 or self.knots % 2:
            raise ParameterError(f"Knot count N must be an even integer >= 4, got {self.knots}")
        object.__setattr__(self, "knots", int(self.knots))

    @property
    def h(self) -> float:
        return self.length / self.knots

    @property
    def left_edge(self) -> float:
        return self.center - self.length / 2

    @property
    def right_edge(self) -> float:
        return self.center + self.length / 2

    def coordinates(self) -> np.ndarray:
        """Knot positions x_1..x_N."""
        return self.left_edge + (np.arange(1, self.knots + 1) - 0.5) * self.h

    def index_of(self, x: float) -> int:
        """1-based index of the knot nearest to x, clipped to the grid."""
        i = int(np.floor((x - self.left_edge) / self.h)) + 1
        return min(max(i, 1), self.knots)

    def window(self, lo: float, hi: float) -> tuple[int, int]:
        """Inclusive 1-based index range of the knots lying in [lo, hi]."""
        xs = self.coordinates()
        inside = np.nonzero((xs >= lo) & (xs <= hi))[0]
        if inside.size == 0:
            raise ParameterError(f"No knots inside the window [{lo}, {hi}]")
        return int(inside[0]) + 1, int(inside[-1]) + 1


@dataclass(frozen=True)
class WeightTable:
    """Quadrature weights xi_0..xi_j* for a half range of j* steps."""

    rule: QuadratureRule
    jstar: int
    weights: tuple[Fraction, ...]

    def normalization(self) -> Fraction:
        """xi_0 + 2 * sum_{j>=1} xi_j, exactly."""
        return self.weights[0] + 2 * sum(self.weights[1:], Fraction(0))

    def as_array(self) -> np.ndarray:
        return np.array([float(w) for w in self.weights])


def build_grid(L: float, N: int, center: float = 0.0) -> Grid:
    """Create the uniform grid of N knots over a window of length L."""
    return Grid(length=float(L), knots=N, center=center)


def quadrature_weights(rule: QuadratureRule | str, jstar: int) -> WeightTable:
    """
    Build the weight table of a composite rule over the half range 0..j*.

    Simpson needs at least two panels; with j* = 1 we fall back to the
    trapezoidal rule.
    """
    rule = QuadratureRule(rule)
    if int(jstar) != jstar or jstar < 1:
        raise ParameterError(f"Half range j* must be a positive integer, got {jstar}")
    jstar = int(jstar)

    if rule is QuadratureRule.SIMPSON and jstar == 1:
        logger.warning("Simpson weights need j* >= 2; using the trapezoidal rule for j* = 1")
        rule = QuadratureRule.TRAPEZOID

    if rule is QuadratureRule.RIEMANN:
        weights = [Fraction(1)] * (jstar + 1)
    elif rule is QuadratureRule.TRAPEZOID:
        weights = [Fraction(1)] * jstar + [Fraction(1, 2)]
    else:
        weights = []
        for j in range(jstar + 1):
            from_end = jstar - j
            if from_end == 0:
                weights.append(Fraction(1, 3))
            elif from_end % 2:
                weights.append(Fraction(4, 3))
            else:
                weights.append(Fraction(2, 3))

    return WeightTable(rule=rule, jstar=jstar, weights=tuple(weights))


def _as_values(values) -> np.ndarray:
    return np.asarray(getattr(values, "values", values), dtype=float)


def resolve_index(values, position: int, mode: BoundaryMode) -> float:
    """Value at any 1-based virtual position, inside the grid or beyond it."""
    n = _as_values(values)
    size = n.size
    if 1 <= position <= size:
        return float(n[position - 1])

    side = mode.left if position < 1 else mode.right
    if side is BoundaryMode.PERIODIC:
        return float(n[(position - 1) % size])
    if side is BoundaryMode.DIRICHLET:
        return 0.0
    return float(n[0] if position < 1 else n[-1])


def resolve_offset(values, i: int, offset: int, mode: BoundaryMode) -> float:
    """
    Value of n_{i+offset} with out-of-range neighbours resolved by the BC.

    Kernels are truncated below L/2, so offsets stay under N/2 and a single
    periodic wrap is always enough.
    """
    size = _as_values(values).size
    if not 1 <= i <= size:
        raise ContractError(f"Knot index {i} outside 1..{size}")
    if abs(offset) >= size / 2:
        raise ContractError(
            f"Offset {offset} reaches half the domain (N = {size}); "
            "kernel truncation radius must stay below L/2"
        )
    return resolve_index(values, i + offset, mode)


def _pad_side(values: np.ndarray, before: int, after: int, side: BoundaryMode) -> np.ndarray:
    if side is BoundaryMode.PERIODIC:
        return np.pad(values, (before, after), mode="wrap")
    if side is BoundaryMode.DIRICHLET:
        return np.pad(values, (before, after), mode="constant")
    return np.pad(values, (before, after), mode="edge")


def pad_field(values, width: int, mode: BoundaryMode) -> np.ndarray:
    """Extend the knot values by `width` virtual knots on each side."""
    n = _as_values(values)
    if width == 0:
        return n.copy()
    if mode.left is mode.right:
        return _pad_side(n, width, width, mode)
    # wrap needs both sides at once, so it never reaches the mixed branch
    padded = _pad_side(n, width, 0, mode.left)
    return _pad_side(padded, 0, width, mode.right)
