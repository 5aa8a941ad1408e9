"""
Interaction kernels for the jump, coalescence and repulsion processes.

Each kernel is an even, nonnegative bump of mass mu: a Gaussian or a rectangle,
optionally split into a symmetric pair shifted by +-s. The same evaluator serves
all three roles (a, b and phi), so a single frozen spec describes each one.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..errors import ParameterError

GAUSSIAN_Q = 6.0
RECTANGLE_Q = 1.0


class KernelShape(str, Enum):
    """The profile families a kernel can take."""

    GAUSSIAN = "gaussian"
    RECTANGLE = "rectangle"


@dataclass(frozen=True)
class KernelSpec:
    """
    Parametric description of one interaction kernel.

    Attributes:
        shape: Gaussian or rectangle profile
        mu: intensity, the integral of the kernel; 0 switches the kernel off
        sigma: range of a single bump
        shift: pair shift s; 0 means a single bump centred at the origin
        cutoff: optional truncation radius below Q sigma + s, for kernels that
            would otherwise reach half of a periodic domain
    """

    shape: KernelShape = KernelShape.GAUSSIAN
    mu: float = 0.0
    sigma: float = 1.0
    shift: float = 0.0
    cutoff: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "shape", KernelShape(self.shape))
        if not math.isfinite(self.mu) or self.mu < 0:
            raise ParameterError(f"Kernel intensity mu must be >= 0, got {self.mu}")
        if not math.isfinite(self.sigma) or self.sigma <= 0:
            raise ParameterError(f"Kernel range sigma must be > 0, got {self.sigma}")
        if not math.isfinite(self.shift) or self.shift < 0:
            raise ParameterError(f"Kernel shift must be >= 0, got {self.shift}")
        if self.cutoff is not None and not (0 < self.cutoff < math.inf):
            raise ParameterError(f"Kernel cutoff must be a positive radius, got {self.cutoff}")

    @property
    def enabled(self) -> bool:
        return self.mu > 0

    @classmethod
    def disabled(cls) -> "KernelSpec":
        return cls()

    def label(self) -> str:
        """Short notation such as G(1,1) or C(1,1,8)."""
        letter = "G" if self.shape is KernelShape.GAUSSIAN else "C"
        if self.shift > 0:
            return f"{letter}({self.mu:g},{self.sigma:g},{self.shift:g})"
        return f"{letter}({self.mu:g},{self.sigma:g})"


def truncation_radius(spec: KernelSpec) -> float:
    """Distance beyond which the kernel is treated as exactly zero."""
    if not spec.enabled:
        return 0.0
    q = GAUSSIAN_Q if spec.shape is KernelShape.GAUSSIAN else RECTANGLE_Q
    radius = q * spec.sigma + spec.shift
    if spec.cutoff is not None:
        return min(radius, spec.cutoff)
    return radius


def kernel_mass(spec: KernelSpec) -> float:
    """The normalisation every kernel is built to: its intensity mu."""
    return spec.mu


def _single_bump(shape: KernelShape, mu: float, sigma: float, x: np.ndarray) -> np.ndarray:
    if shape is KernelShape.GAUSSIAN:
        return mu / math.sqrt(2.0 * math.pi * sigma**2) * np.exp(-(x**2) / (2.0 * sigma**2))
    return np.where(np.abs(x) <= sigma, mu / (2.0 * sigma), 0.0)


def eval_kernel(spec: KernelSpec, x):
    """
    Evaluate the kernel at one coordinate or an array of coordinates.

    The result is zero outside the truncation radius, which is what the solver
    actually integrates. Scalars in give a float back.
    """
    xs = np.asarray(x, dtype=float)
    if not spec.enabled:
        values = np.zeros_like(xs)
    elif spec.shift > 0:
        left = _single_bump(spec.shape, spec.mu, spec.sigma, xs - spec.shift)
        right = _single_bump(spec.shape, spec.mu, spec.sigma, xs + spec.shift)
        values = 0.5 * (left + right)
    else:
        values = _single_bump(spec.shape, spec.mu, spec.sigma, xs)

    if spec.enabled:
        values = np.where(np.abs(xs) <= truncation_radius(spec), values, 0.0)

    if np.ndim(x) == 0:
        return float(values)
    return values
