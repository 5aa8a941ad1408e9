"""
Measures of a density field: mass, symmetry, error against a reference.

All functions are pure and work on DensityField values; none of them change
their inputs.
"""

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from ..errors import MetricError, ParameterError
from ..model.state import DensityField


@dataclass(frozen=True)
class ErrorReport:
    """
    Relative absolute deviation of a candidate field from a reference.

    Attributes:
        theta_percent: sum |n_i - ref_i| / sum ref_i, in percent
        region: inclusive 1-based knot range of the candidate that was compared
        n_points: number of knots compared
    """

    theta_percent: float
    region: tuple[int, int]
    n_points: int


def total_mass(field: DensityField) -> float:
    """h * sum_i n_i."""
    return field.grid.h * float(np.sum(field.values))


def flat_limit(field: DensityField) -> float:
    """Level a mass-conserving run flattens out to: mass / L."""
    return total_mass(field) / field.grid.length


def symmetry_defect(field: DensityField) -> float:
    """max_i |n_i - n_{N+1-i}|; zero for a profile symmetric about the centre."""
    values = field.values
    return float(np.max(np.abs(values - values[::-1])))


def mirror_field(field: DensityField) -> DensityField:
    """The field reflected about the window centre (index reversal)."""
    return field.with_values(field.values[::-1].copy())


def max_abs_rate(rates) -> float:
    values = np.asarray(getattr(rates, "values", rates), dtype=float)
    return float(np.max(np.abs(values))) if values.size else 0.0


def homogeneous_solution(n0: float, mu_b: float, t: float) -> float:
    """Closed-form flat density n0 / (1 + mu_b n0 t)."""
    return n0 / (1.0 + mu_b * n0 * t)


def front_balance(field: DensityField, n_left: float) -> float:
    """
    Particles lost on the left of x = 0 minus particles gained on the right.

    For a step of height n_left spreading by free jumps both amounts are equal.
    """
    x = field.coordinates()
    n = field.values
    h = field.grid.h
    lost = h * float(np.sum(n_left - n[x < 0]))
    gained = h * float(np.sum(n[x > 0]))
    return lost - gained


def _reference_on(candidate: DensityField, reference: DensityField, lo: int, hi: int) -> np.ndarray:
    if reference.grid == candidate.grid:
        return reference.values[lo - 1 : hi]
    xs = candidate.coordinates()[lo - 1 : hi]
    ref_x = reference.coordinates()
    if xs[0] < ref_x[0] or xs[-1] > ref_x[-1]:
        raise MetricError(
            f"Reference covers [{ref_x[0]:g}, {ref_x[-1]:g}] but the region needs "
            f"[{xs[0]:g}, {xs[-1]:g}]"
        )
    return CubicSpline(ref_x, reference.values)(xs)


def theta(
    candidate: DensityField,
    reference: DensityField,
    region: tuple[float, float] | None = None,
) -> ErrorReport:
    """
    Error metric in percent over a coordinate window of the candidate grid.

    A reference on a different (finer) grid is brought to the candidate knots
    with a cubic spline. Raises MetricError when the reference sums to zero.
    """
    if region is None:
        lo, hi = 1, candidate.grid.knots
    else:
        lo, hi = candidate.grid.window(*region)
    ref = _reference_on(candidate, reference, lo, hi)
    cand = candidate.values[lo - 1 : hi]
    denominator = float(np.sum(ref))
    if denominator == 0.0:
        raise MetricError("Reference density sums to zero over the region; theta is undefined")
    value = float(np.sum(np.abs(cand - ref))) / denominator * 100.0
    return ErrorReport(theta_percent=value, region=(lo, hi), n_points=hi - lo + 1)


def fit_loglog_slope(points: Iterable[Sequence[float]]) -> float:
    """Least-squares slope of log(error) against log(scale)."""
    data = np.asarray(list(points), dtype=float)
    if data.ndim != 2 or data.shape[0] < 2 or data.shape[1] != 2:
        raise ParameterError("Slope fit needs at least two (scale, error) pairs")
    if not np.all(np.isfinite(data)) or np.any(data <= 0):
        raise ParameterError("Slope fit needs finite positive scales and errors")
    slope, _ = np.polyfit(np.log(data[:, 0]), np.log(data[:, 1]), 1)
    return float(slope)


def gaussian_integral(mu: float, sigma: float, half_width: float) -> float:
    """Exact integral of G(mu, sigma) over [-half_width, half_width]."""
    return mu * math.erf(half_width / (sigma * math.sqrt(2.0)))
