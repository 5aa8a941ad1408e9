"""
Convergence and cost studies built on top of single runs.

* sweep_errors: theta(h, dt) against a finer reference run, per region
* quadrature_study: error of one composite integration against the exact value
* compare_paths: direct against FFT rates and trajectories
* timing_sweep: seconds per rate evaluation for growing N
"""

import logging
import time
from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence

import numpy as np
import pandas as pd

from ..errors import ConfigurationError, KineticError, MetricError, ParameterError
from ..model.grid import QuadratureRule, build_grid, quadrature_weights
from ..model.initial import sample_initial
from ..model.kernels import KernelShape, KernelSpec, eval_kernel
from ..scenario.scenario import RhsPath, Scenario
from ..solver.config import IntegrationConfig
from ..solver.runner import Simulation, build_rate_function
from ..solver.spectral import check_spectral_eligible
from .diagnostics import fit_loglog_slope, gaussian_integral, theta

logger = logging.getLogger(__name__)


def with_resolution(
    scenario: Scenario, h: float | None = None, dt: float | None = None
) -> Scenario:
    """Same scenario on a mesh h and/or time step dt, keeping L and T."""
    changes = {}
    if h is not None:
        knots = round(scenario.grid.length / h)
        if knots < 4 or knots % 2 or abs(knots * h - scenario.grid.length) > 1e-9 * knots * h:
            raise ParameterError(
                f"Mesh h={h:g} does not split L={scenario.grid.length:g} into an even knot count"
            )
        changes["grid"] = build_grid(scenario.grid.length, knots, scenario.grid.center)
    if dt is not None:
        cfg = scenario.integration
        changes["integration"] = IntegrationConfig(
            dt=dt, t_end=cfg.t_end, snapshot_times=(cfg.t_end,)
        )
    return replace(scenario, **changes)


def _final_field(scenario: Scenario):
    return Simulation(scenario).run().final.field


@dataclass
class SweepReport:
    """theta per (h, dt, region) cell and the fitted log-log slopes."""

    table: pd.DataFrame
    slopes: pd.DataFrame


def sweep_errors(
    base: Scenario,
    hs: Sequence[float],
    dts: Sequence[float],
    ref_h: float,
    ref_dt: float,
    regions: Sequence[tuple[float, float]] | None = None,
    progress_callback: Optional[Callable[[], None]] = None,
) -> SweepReport:
    """
    Run every (h, dt) cell to the base horizon and compare with a reference.

    Cells that fail (divergence, window cap, ...) stay in the table with their
    status and a NaN theta.
    """
    if any(h < ref_h for h in hs) or any(dt < ref_dt for dt in dts):
        raise ParameterError("Reference settings must be at least as fine as every sweep point")
    if ref_h in hs and ref_dt in dts:
        raise ParameterError(
            f"Reference (h={ref_h:g}, dt={ref_dt:g}) is itself a sweep cell; pick a finer one"
        )

    regions = list(regions if regions is not None else base.output.windows) or [None]
    logger.info("Reference run at h=%g, dt=%g", ref_h, ref_dt)
    reference = _final_field(with_resolution(base, ref_h, ref_dt))

    rows = []
    for h in hs:
        for dt in dts:
            status, field = "ok", None
            try:
                field = _final_field(with_resolution(base, h, dt))
            except KineticError as exc:
                status = type(exc).__name__
                logger.warning("Cell h=%g dt=%g failed: %s", h, dt, exc)
            for region in regions:
                value = np.nan
                cell_status = status
                if field is not None:
                    try:
                        value = theta(field, reference, region).theta_percent
                    except (MetricError, ParameterError) as exc:
                        cell_status = f"metric: {exc}"
                rows.append(
                    {
                        "h": h,
                        "dt": dt,
                        "region": "all" if region is None else f"{region[0]:g}:{region[1]:g}",
                        "theta": value,
                        "status": cell_status,
                    }
                )
            if progress_callback:
                progress_callback()

    table = pd.DataFrame(rows)
    return SweepReport(table=table, slopes=_slopes(table))


def _slope_or_nan(points) -> float:
    points = [(s, e) for s, e in points if np.isfinite(e) and e > 0]
    if len(points) < 2:
        return float("nan")
    return fit_loglog_slope(points)


def _slopes(table: pd.DataFrame) -> pd.DataFrame:
    rows = []
    for region, group in table.groupby("region", sort=False):
        for dt, cells in group.groupby("dt", sort=False):
            if cells["h"].nunique() > 1:
                slope = _slope_or_nan(zip(cells["h"], cells["theta"]))
                rows.append({"region": region, "axis": "h", "fixed": dt, "slope": slope})
        for h, cells in group.groupby("h", sort=False):
            if cells["dt"].nunique() > 1:
                slope = _slope_or_nan(zip(cells["dt"], cells["theta"]))
                rows.append({"region": region, "axis": "dt", "fixed": h, "slope": slope})
    return pd.DataFrame(rows, columns=["region", "axis", "fixed", "slope"])


def quadrature_study(
    spec: KernelSpec,
    half_width: float,
    hs: Sequence[float],
    rule: QuadratureRule | str = QuadratureRule.SIMPSON,
) -> tuple[pd.DataFrame, float]:
    """
    Integrate one kernel over [-half_width, half_width] with the weight tables.

    Returns theta per h (in percent of the exact integral) and the fitted slope.
    Rows whose error is exactly zero come back with status "exact" and stay out
    of the fit; with fewer than two usable rows the slope is NaN.
    """
    if spec.shift != 0:
        raise ParameterError("Quadrature study uses unshifted kernels")
    if spec.shape is KernelShape.GAUSSIAN:
        exact = gaussian_integral(spec.mu, spec.sigma, half_width)
    else:
        exact = spec.mu * min(half_width, spec.sigma) / spec.sigma
    rows = []
    for h in hs:
        jstar = round(half_width / h)
        if abs(jstar * h - half_width) > 1e-9 * half_width:
            raise ParameterError(f"h={h:g} does not divide the half width {half_width:g}")
        table = quadrature_weights(rule, jstar)
        samples = eval_kernel(spec, np.arange(jstar + 1) * h)
        weighted = table.as_array() * samples
        value = h * (weighted[0] + 2.0 * weighted[1:].sum())
        error = abs(value - exact) / exact * 100.0
        rows.append(
            {
                "h": h,
                "value": value,
                "exact": exact,
                "theta": error,
                "status": "ok" if error > 0 else "exact",
            }
        )
    frame = pd.DataFrame(rows)
    slope = _slope_or_nan(zip(frame["h"], frame["theta"]))
    if not np.isfinite(slope):
        logger.warning("Quadrature errors at round-off on every mesh, no slope fitted")
    return frame, slope


@dataclass
class PathComparison:
    """Direct against FFT evaluation of one scenario."""

    rhs_difference: float
    trajectory: pd.DataFrame
    direct_seconds: float
    spectral_seconds: float

    @property
    def max_difference(self) -> float:
        return float(self.trajectory["max_diff"].max()) if len(self.trajectory) else 0.0

    @property
    def time_ratio(self) -> float:
        return self.spectral_seconds / self.direct_seconds if self.direct_seconds else float("nan")


def _time_rate(rate, values: np.ndarray, repeats: int) -> float:
    best = float("inf")
    for _ in range(max(1, repeats)):
        start = time.perf_counter()
        rate(values)
        best = min(best, time.perf_counter() - start)
    return best


def compare_paths(scenario: Scenario, repeats: int = 5) -> PathComparison:
    """
    Evaluate and integrate the scenario along both paths.

    The direct side uses unit weights, which is what the FFT sums carry, so any
    difference left is round-off. Raises ConfigurationError for scenarios the
    FFT path cannot run.
    """
    check_spectral_eligible(scenario.boundary, scenario.b)
    if scenario.adaptive.enabled:
        raise ConfigurationError("Path comparison needs a fixed periodic window")

    direct = replace(scenario, path=RhsPath.DIRECT, quadrature=QuadratureRule.RIEMANN)
    spectral = replace(scenario, path=RhsPath.SPECTRAL, quadrature=QuadratureRule.RIEMANN)

    values = sample_initial(scenario.initial, scenario.grid).values
    direct_rate = build_rate_function(direct, scenario.grid)
    spectral_rate = build_rate_function(spectral, scenario.grid)
    rhs_difference = float(np.max(np.abs(direct_rate(values) - spectral_rate(values))))

    direct_run = Simulation(direct).run().record
    spectral_run = Simulation(spectral).run().record
    rows = [
        {"t": a.t, "max_diff": float(np.max(np.abs(a.field.values - b.field.values)))}
        for a, b in zip(direct_run.snapshots, spectral_run.snapshots)
    ]
    return PathComparison(
        rhs_difference=rhs_difference,
        trajectory=pd.DataFrame(rows, columns=["t", "max_diff"]),
        direct_seconds=_time_rate(direct_rate, values, repeats),
        spectral_seconds=_time_rate(spectral_rate, values, repeats),
    )


def timing_sweep(
    scenario: Scenario, knots: Sequence[int], repeats: int = 5
) -> tuple[pd.DataFrame, dict[str, float]]:
    """
    Seconds per rate evaluation for each N at fixed L, per available path.

    Returns the table and the log-log slope of time against N for each path.
    """
    spectral_ok = True
    try:
        check_spectral_eligible(scenario.boundary, scenario.b)
    except ConfigurationError:
        spectral_ok = False

    rows = []
    for n in knots:
        grid = build_grid(scenario.grid.length, n)
        values = sample_initial(scenario.initial, grid).values
        direct = build_rate_function(scenario, grid, RhsPath.DIRECT)
        row = {"N": n, "direct": _time_rate(direct, values, repeats), "spectral": np.nan}
        if spectral_ok:
            spectral = build_rate_function(scenario, grid, RhsPath.SPECTRAL)
            row["spectral"] = _time_rate(spectral, values, repeats)
        rows.append(row)

    frame = pd.DataFrame(rows, columns=["N", "direct", "spectral"])
    slopes = {"direct": fit_loglog_slope(zip(frame["N"], frame["direct"]))}
    if spectral_ok:
        slopes["spectral"] = fit_loglog_slope(zip(frame["N"], frame["spectral"]))
    return frame, slopes
