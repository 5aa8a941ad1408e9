"""
Right-hand side of the discretised jump-coalescence equation.

This is where particles actually move: they hop away from crowded spots, pair
up and merge, and every knot adds up what it gains and loses. 🧮

The rate at knot i collects three contributions:

* jumps, h sum_j xi_j a_j (lambda_i (n_{i-j} + n_{i+j}) - n_i (lambda_{i-j} + lambda_{i+j}))
* coalescence loss, -2h n_i (xi_0 b_0 n_i + sum_j xi_j b_j (n_{i-j} + n_{i+j}))
* coalescence gain, 2h xi_0 b_0 n_i^2 + 4h sum_j xi_j b_{2j} n_{i-j} n_{i+j}

with the repulsion factor lambda_i = exp(-h sum_j xi_j phi_j n_{i-j}). Sums over
neighbours run on the field padded by the boundary mode, so every knot sees the
same arithmetic. The symmetric sums are discrete convolutions with the weighted
kernel taps; only the gain product needs an explicit loop.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from ..errors import ConfigurationError
from ..model.grid import (
    BoundaryMode,
    Grid,
    QuadratureRule,
    WeightTable,
    pad_field,
    quadrature_weights,
    resolve_index,
)
from ..model.kernels import KernelSpec, eval_kernel, truncation_radius
from ..model.state import DensityField

RateFunction = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class SampledKernel:
    """Kernel values k_j = k(j * step) for j = 0..reach plus their weights."""

    spec: KernelSpec
    samples: np.ndarray
    table: WeightTable | None

    @property
    def reach(self) -> int:
        return self.samples.size - 1 if self.samples.size else 0

    @property
    def enabled(self) -> bool:
        return self.samples.size > 0

    @property
    def weighted(self) -> np.ndarray:
        """xi_j k_j for j = 0..reach."""
        if not self.enabled:
            return np.zeros(0)
        return self.table.as_array() * self.samples

    def taps(self, with_center: bool) -> np.ndarray:
        """Symmetric taps for offsets -reach..reach, ready for np.convolve."""
        half = self.weighted
        full = np.concatenate([half[:0:-1], half])
        if not with_center:
            full[self.reach] = 0.0
        return full


@dataclass(frozen=True)
class SampledKernels:
    """
    Everything precomputed for the direct RHS on one grid.

    Sampling the kernels is the slow part of setting up, so we do it once per
    grid and reuse the taps for every stage of every step.
    """

    a: SampledKernel  # Jump kernel samples a_j
    b: SampledKernel  # Coalescence kernel samples b_j
    b2: SampledKernel  # Coalescence samples at doubled offsets b_{2j}, j <= floor(j_b / 2)
    phi: SampledKernel  # Repulsion potential samples phi_j
    grid: Grid  # The grid the samples belong to
    rule: QuadratureRule  # Rule behind the weight tables

    @property
    def h(self) -> float:
        return self.grid.h

    @property
    def pad_width(self) -> int:
        return max(self.a.reach + self.phi.reach, self.b.reach)


@dataclass(frozen=True)
class RateField:
    """Time derivatives dn_i/dt at the knots of a grid."""

    grid: Grid
    values: np.ndarray


def half_range(spec: KernelSpec, grid: Grid) -> int:
    """
    Number of knots j* covering the truncation radius, rounded up.

    Raises ConfigurationError when the kernel would reach half the domain.
    """
    radius = truncation_radius(spec)
    if radius == 0:
        return 0
    if radius >= grid.length / 2:
        raise ConfigurationError(
            f"Kernel {spec.label()} reaches R = {radius:g} >= L/2 = {grid.length / 2:g}; "
            "use a larger domain length L"
        )
    # round first so that R/h = 60.000000001 stays 60
    jstar = max(1, math.ceil(round(radius / grid.h, 9)))
    if jstar >= grid.knots // 2:
        raise ConfigurationError(
            f"Kernel {spec.label()} needs {jstar} knots but only {grid.knots // 2 - 1} "
            "fit in half the domain; use a larger domain length L"
        )
    return jstar


def _sample(spec: KernelSpec, jstar: int, step: float, rule: QuadratureRule) -> SampledKernel:
    if not spec.enabled:
        return SampledKernel(spec=spec, samples=np.zeros(0), table=None)
    samples = eval_kernel(spec, np.arange(jstar + 1) * step)
    if jstar == 0:
        table = WeightTable(rule=QuadratureRule.RIEMANN, jstar=0, weights=(Fraction(1),))
    else:
        table = quadrature_weights(rule, jstar)
    return SampledKernel(spec=spec, samples=samples, table=table)


def build_workspace(
    a_spec: KernelSpec,
    b_spec: KernelSpec,
    phi_spec: KernelSpec,
    grid: Grid,
    rule: QuadratureRule | str = QuadratureRule.SIMPSON,
) -> SampledKernels:
    """Sample the three kernels on the grid and attach their weight tables."""
    rule = QuadratureRule(rule)
    h = grid.h
    j_a = half_range(a_spec, grid)
    j_b = half_range(b_spec, grid)
    j_phi = half_range(phi_spec, grid)
    return SampledKernels(
        a=_sample(a_spec, j_a, h, rule),
        b=_sample(b_spec, j_b, h, rule),
        b2=_sample(b_spec, j_b // 2, 2 * h, rule),
        phi=_sample(phi_spec, j_phi, h, rule),
        grid=grid,
        rule=rule,
    )


def _lambda_padded(ext: np.ndarray, width: int, size: int, reach: int, ws: SampledKernels):
    """lambda at virtual positions -reach..size-1+reach from a padded field."""
    if not ws.phi.enabled:
        return np.ones(size + 2 * reach)
    j_phi = ws.phi.reach
    window = ext[width - reach - j_phi : width + size + reach + j_phi]
    exponent = np.convolve(window, ws.phi.taps(with_center=True), mode="valid")
    return np.exp(-ws.h * exponent)


def compute_lambda(field: DensityField, ws: SampledKernels, mode: BoundaryMode) -> np.ndarray:
    """Repulsion factors lambda_1..lambda_N."""
    values = field.values
    width = ws.phi.reach
    ext = pad_field(values, width, mode)
    return _lambda_padded(ext, width, values.size, 0, ws)


def _rates(values: np.ndarray, ws: SampledKernels, mode: BoundaryMode) -> np.ndarray:
    n = np.asarray(values, dtype=float)
    size = n.size
    h = ws.h
    width = ws.pad_width
    ext = pad_field(n, width, mode)
    rate = np.zeros(size)

    if ws.a.enabled:
        j_a = ws.a.reach
        lam_ext = _lambda_padded(ext, width, size, j_a, ws)
        lam = lam_ext[j_a : j_a + size]
        taps = ws.a.taps(with_center=False)
        incoming = np.convolve(ext[width - j_a : width + size + j_a], taps, mode="valid")
        outgoing = np.convolve(lam_ext, taps, mode="valid")
        rate += h * (lam * incoming - n * outgoing)

    if ws.b.enabled:
        j_b = ws.b.reach
        b0 = ws.b.samples[0]
        neighbours = np.convolve(
            ext[width - j_b : width + size + j_b], ws.b.taps(with_center=False), mode="valid"
        )
        rate -= 2.0 * h * n * (ws.b.weighted[0] * n + neighbours)

        gain = 2.0 * h * float(ws.b2.table.weights[0]) * b0 * n * n
        weighted2 = ws.b2.weighted
        for j in range(1, ws.b2.reach + 1):
            left = ext[width - j : width - j + size]
            right = ext[width + j : width + j + size]
            gain = gain + 4.0 * h * weighted2[j] * left * right
        rate += gain

    return rate


def compute_rhs(field: DensityField, ws: SampledKernels, mode: BoundaryMode) -> RateField:
    """Rates dn_i/dt for the whole field; lambda is recomputed on every call."""
    return RateField(grid=field.grid, values=_rates(field.values, ws, mode))


def make_rate_function(ws: SampledKernels, mode: BoundaryMode) -> RateFunction:
    """Bind the workspace and boundary mode into a values -> rates function."""

    def rate(values: np.ndarray) -> np.ndarray:
        return _rates(values, ws, mode)

    return rate


def coalescence_coefficient(ws: SampledKernels) -> float:
    """
    Effective mu_b seen by a flat field: 2 Q_h[b] - Q_2h[b].

    A flat density n decays as dn/dt = -coefficient * n^2 under the discrete
    equation, with Q the weighted kernel sums actually used by compute_rhs.
    """
    if not ws.b.enabled:
        return 0.0
    h = ws.h
    loss = ws.b.weighted[0] + 2.0 * ws.b.weighted[1:].sum()
    gain = ws.b2.weighted[0] + 2.0 * ws.b2.weighted[1:].sum()
    return 2.0 * h * loss - 2.0 * h * gain


def homogeneous_rate(n: float, ws: SampledKernels) -> float:
    """dn/dt of a spatially flat density under the discrete equation."""
    return -coalescence_coefficient(ws) * n * n


def compute_rhs_naive(
    field: DensityField,
    a_spec: KernelSpec,
    b_spec: KernelSpec,
    phi_spec: KernelSpec,
    mode: BoundaryMode,
) -> RateField:
    """
    Reference rates from the untruncated compact form with unit weights.

    Every sum runs over all offsets |j| <= N/2 - 1 with plain loops, and values
    at any virtual index come from resolve_index. Meant for small grids in tests.
    """
    values = field.values
    size = values.size
    h = field.grid.h
    span = size // 2 - 1
    offsets = range(-span, span + 1)

    a = {j: eval_kernel(a_spec, j * h) for j in offsets}
    b = {j: eval_kernel(b_spec, j * h) for j in offsets}
    b2 = {j: eval_kernel(b_spec, 2 * j * h) for j in offsets}
    phi = {j: eval_kernel(phi_spec, j * h) for j in offsets}

    def n_at(position: int) -> float:
        return resolve_index(values, position, mode)

    lambdas: dict[int, float] = {}

    def lam(position: int) -> float:
        if position not in lambdas:
            total = sum(phi[k] * n_at(position - k) for k in offsets)
            lambdas[position] = math.exp(-h * total)
        return lambdas[position]

    rates = np.zeros(size)
    for i in range(1, size + 1):
        n_i = n_at(i)
        total = 0.0
        for j in offsets:
            n_left = n_at(i - j)
            total += a[j] * (lam(i) * n_left - lam(i - j) * n_i)
            total -= 2.0 * b[j] * n_i * n_left
            total += 2.0 * b2[j] * n_left * n_at(i + j)
        rates[i - 1] = h * total
    return RateField(grid=field.grid, values=rates)
