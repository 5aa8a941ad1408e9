"""
Initial density profiles.

Rectangles, several shifted rectangles, a cosine modulation, a step, a Gaussian
and a constant. Periodic repetition is never built into the profile itself; the
periodic boundary mode takes care of images.
"""

import math
from dataclasses import dataclass
from typing import ClassVar, Union

import numpy as np

from ..errors import ParameterError
from .grid import Grid
from .state import DensityField


def _check_nonnegative(name: str, value: float) -> None:
    if not math.isfinite(value) or value < 0:
        raise ParameterError(f"{name} must be a finite value >= 0, got {value}")


def _check_positive(name: str, value: float) -> None:
    if not math.isfinite(value) or value <= 0:
        raise ParameterError(f"{name} must be > 0, got {value}")


def _rectangle(v: float, sigma: float, x: np.ndarray) -> np.ndarray:
    return np.where(np.abs(x) <= sigma, v / (2.0 * sigma), 0.0)


@dataclass(frozen=True, kw_only=True)
class _InitialCondition:
    """Shared behaviour: evaluation at knots, optionally mirrored x -> -x."""

    variant: ClassVar[str]
    mirrored: bool = False

    def profile(self, x: np.ndarray, length: float) -> np.ndarray:
        raise NotImplementedError

    def density(self, x: np.ndarray, length: float) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return self.profile(-x if self.mirrored else x, length)


@dataclass(frozen=True, kw_only=True)
class RectangleIC(_InitialCondition):
    """A single rectangle of mass v and half-width sigma."""

    variant: ClassVar[str] = "rectangle"
    v: float = 1.0
    sigma: float = 1.0

    def __post_init__(self):
        _check_nonnegative("Rectangle amplitude v", self.v)
        _check_positive("Rectangle range sigma", self.sigma)

    def profile(self, x, length):
        return _rectangle(self.v, self.sigma, x)


@dataclass(frozen=True, kw_only=True)
class MultiRectangleIC(_InitialCondition):
    """
    N0 rectangles spread evenly over the window.

    Rectangle k has amplitude v_k and range sigma_k and is shifted by
    s_k = -L/2 + (k - 1/2) L / N0.
    """

    variant: ClassVar[str] = "multi_rectangle"
    amplitudes: tuple[float, ...] = (1.0,)
    ranges: tuple[float, ...] = (1.0,)

    def __post_init__(self):
        object.__setattr__(self, "amplitudes", tuple(float(v) for v in self.amplitudes))
        object.__setattr__(self, "ranges", tuple(float(s) for s in self.ranges))
        if len(self.amplitudes) < 1:
            raise ParameterError("Multi-rectangle profile needs at least one amplitude")
        if len(self.ranges) == 1 and len(self.amplitudes) > 1:
            object.__setattr__(self, "ranges", self.ranges * len(self.amplitudes))
        if len(self.ranges) != len(self.amplitudes):
            raise ParameterError(
                f"Got {len(self.amplitudes)} amplitudes but {len(self.ranges)} ranges"
            )
        for v in self.amplitudes:
            _check_nonnegative("Rectangle amplitude v_k", v)
        for sigma in self.ranges:
            _check_positive("Rectangle range sigma_k", sigma)

    @property
    def count(self) -> int:
        return len(self.amplitudes)

    def shifts(self, length: float) -> np.ndarray:
        k = np.arange(1, self.count + 1)
        return -length / 2 + (k - 0.5) * length / self.count

    def profile(self, x, length):
        total = np.zeros_like(x)
        for v, sigma, s in zip(self.amplitudes, self.ranges, self.shifts(length)):
            total = total + _rectangle(v, sigma, x + s)
        return total


@dataclass(frozen=True, kw_only=True)
class TrigonometricIC(_InitialCondition):
    """n0 (1 + mu0 cos(2 pi k x / L)) with an integer number k of periods."""

    variant: ClassVar[str] = "trigonometric"
    n0: float = 1.0
    mu0: float = 1.0
    k: int = 1

    def __post_init__(self):
        _check_nonnegative("Trigonometric level n0", self.n0)
        if not 0 < self.mu0 <= 1:
            raise ParameterError(f"Modulation mu0 must be in (0, 1], got {self.mu0}")
        if float(self.k) != int(self.k) or self.k < 1:
            raise ParameterError(
                f"Wave number k must be a positive integer to stay periodic, got {self.k}"
            )
        object.__setattr__(self, "k", int(self.k))

    def profile(self, x, length):
        return self.n0 * (1.0 + self.mu0 * np.cos(2.0 * np.pi * self.k * x / length))


@dataclass(frozen=True, kw_only=True)
class HeavisideIC(_InitialCondition):
    """A step: n0 for x <= 0 and empty for x > 0."""

    variant: ClassVar[str] = "heaviside"
    n0: float = 1.0

    def __post_init__(self):
        _check_nonnegative("Step level n0", self.n0)

    def profile(self, x, length):
        return np.where(x <= 0, self.n0, 0.0)


@dataclass(frozen=True, kw_only=True)
class GaussianIC(_InitialCondition):
    """The Gaussian kernel profile reused as a density."""

    variant: ClassVar[str] = "gaussian"
    mu: float = 1.0
    sigma: float = 1.0

    def __post_init__(self):
        _check_nonnegative("Gaussian intensity mu", self.mu)
        _check_positive("Gaussian range sigma", self.sigma)

    def profile(self, x, length):
        return self.mu / math.sqrt(2.0 * math.pi * self.sigma**2) * np.exp(
            -(x**2) / (2.0 * self.sigma**2)
        )


@dataclass(frozen=True, kw_only=True)
class ConstantIC(_InitialCondition):
    """A flat density n0."""

    variant: ClassVar[str] = "constant"
    n0: float = 1.0

    def __post_init__(self):
        _check_nonnegative("Constant level n0", self.n0)

    def profile(self, x, length):
        return np.full_like(x, self.n0)


InitialConditionSpec = Union[
    RectangleIC, MultiRectangleIC, TrigonometricIC, HeavisideIC, GaussianIC, ConstantIC
]

INITIAL_CONDITIONS: dict[str, type] = {
    cls.variant: cls
    for cls in (RectangleIC, MultiRectangleIC, TrigonometricIC, HeavisideIC, GaussianIC, ConstantIC)
}


def is_discontinuous(spec: InitialConditionSpec) -> bool:
    """True for the profiles with jumps (rectangles and steps)."""
    return isinstance(spec, (RectangleIC, MultiRectangleIC, HeavisideIC))


def sample_initial(spec: InitialConditionSpec, grid: Grid) -> DensityField:
    """Evaluate the profile at the knots of the grid."""
    x = grid.coordinates() - grid.center
    values = spec.density(x, grid.length)
    return DensityField(grid=grid, values=np.maximum(values, 0.0))

