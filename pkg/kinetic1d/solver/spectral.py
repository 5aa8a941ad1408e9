"""
FFT evaluation of the rates for runs without coalescence on a periodic domain.

With b = 0 both sums in the jump term are circular convolutions, so

    dn_i/dt = -h n_i IFFT(a_hat g_hat)_i + h g_i IFFT(a_hat n_hat)_i
    g_i     = exp(-h IFFT(phi_hat n_hat)_i)

The kernel spectra are computed once per grid. Sums carry no quadrature weights
here, so the matching direct evaluation uses the riemann rule.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigurationError
from ..model.grid import BoundaryMode, Grid
from ..model.kernels import KernelSpec, eval_kernel
from ..model.state import DensityField
from .rhs import RateField, RateFunction, half_range

logger = logging.getLogger(__name__)


def dft_forward(values: np.ndarray) -> np.ndarray:
    """F_k = sum_i f_i exp(-2 pi i k i / N), no normalisation."""
    return np.fft.fft(np.asarray(values, dtype=float))


def dft_inverse(spectrum: np.ndarray) -> np.ndarray:
    """Inverse of dft_forward (1/N on this side); the real part is returned."""
    return np.fft.ifft(spectrum).real


def wraparound_samples(spec: KernelSpec, grid: Grid) -> np.ndarray:
    """Kernel at offsets j h for j = -N/2..N/2-1, stored at index j mod N."""
    size = grid.knots
    offsets = np.arange(-(size // 2), size // 2)
    samples = np.zeros(size)
    samples[offsets % size] = eval_kernel(spec, offsets * grid.h)
    return samples


def check_spectral_eligible(boundary: BoundaryMode, b_spec: KernelSpec) -> None:
    """Raise ConfigurationError unless the run is periodic and coalescence-free."""
    if b_spec.enabled:
        raise ConfigurationError(
            f"spectral path requires b = 0, got b = {b_spec.label()}; use the direct path"
        )
    if BoundaryMode(boundary) is not BoundaryMode.PERIODIC:
        raise ConfigurationError(
            f"spectral path requires periodic boundaries, got {BoundaryMode(boundary).value}"
        )


@dataclass
class SpectralWorkspace:
    """
    Kernel spectra for one grid plus scratch space for a single evaluation.

    a_hat and phi_hat never change after the build. The scratch buffers are
    overwritten on every call, so concurrent evaluations need one clone each.
    """

    grid: Grid
    a_hat: np.ndarray
    phi_hat: np.ndarray
    repulsive: bool
    n_hat: np.ndarray = field(repr=False, default=None)
    g_hat: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        self.a_hat.flags.writeable = False
        self.phi_hat.flags.writeable = False
        if self.n_hat is None:
            self.n_hat = np.zeros(self.grid.knots, dtype=complex)
        if self.g_hat is None:
            self.g_hat = np.zeros(self.grid.knots, dtype=complex)

    @property
    def h(self) -> float:
        return self.grid.h

    def clone(self) -> "SpectralWorkspace":
        """Share the kernel spectra, own fresh scratch buffers."""
        return SpectralWorkspace(
            grid=self.grid, a_hat=self.a_hat, phi_hat=self.phi_hat, repulsive=self.repulsive
        )


def build_spectral_workspace(
    a_spec: KernelSpec,
    phi_spec: KernelSpec,
    grid: Grid,
    b_spec: KernelSpec | None = None,
) -> SpectralWorkspace:
    """Sample a and phi in wraparound order and transform them once."""
    if b_spec is not None and b_spec.enabled:
        raise ConfigurationError(
            f"spectral path requires b = 0, got b = {b_spec.label()}; use the direct path"
        )
    # same reach limits as the direct path
    half_range(a_spec, grid)
    half_range(phi_spec, grid)
    return SpectralWorkspace(
        grid=grid,
        a_hat=dft_forward(wraparound_samples(a_spec, grid)),
        phi_hat=dft_forward(wraparound_samples(phi_spec, grid)),
        repulsive=phi_spec.enabled,
    )


def _spectral_rates(values: np.ndarray, ws: SpectralWorkspace) -> np.ndarray:
    n = np.asarray(values, dtype=float)
    h = ws.h
    ws.n_hat[:] = dft_forward(n)
    if ws.repulsive:
        g = np.exp(-h * dft_inverse(ws.phi_hat * ws.n_hat))
    else:
        g = np.ones_like(n)
    ws.g_hat[:] = dft_forward(g)
    outgoing = dft_inverse(ws.a_hat * ws.g_hat)
    incoming = dft_inverse(ws.a_hat * ws.n_hat)
    return -h * n * outgoing + h * g * incoming


def compute_rhs_spectral(field: DensityField, ws: SpectralWorkspace) -> RateField:
    """Rates for a periodic coalescence-free run via the convolution theorem."""
    return RateField(grid=field.grid, values=_spectral_rates(field.values, ws))


def make_spectral_rate_function(ws: SpectralWorkspace) -> RateFunction:
    """Bind a workspace into a values -> rates function."""

    def rate(values: np.ndarray) -> np.ndarray:
        return _spectral_rates(values, ws)

    return rate


def warn_discontinuous(label: str) -> None:
    logger.warning(
        "Initial profile %s is discontinuous; the spectral path can ring near jumps, "
        "consider the direct path",
        label,
    )
