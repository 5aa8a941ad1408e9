"""
Running a scenario from its initial profile to the final time.

The Simulation sets up the rate function for the chosen path, the adaptive
window when asked for, and the observers that write snapshot files and the
time series. Whatever happens, the files written so far and a manifest saying
how the run ended are flushed before an error leaves this module.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

import numpy as np
import pandas as pd

from ..analysis.diagnostics import max_abs_rate, total_mass
from ..errors import DivergenceError, KineticError, ObserverError, ResourceLimitError
from ..model.grid import BoundaryMode, Grid
from ..model.initial import is_discontinuous, sample_initial
from ..model.kernels import kernel_mass
from ..model.state import SolverState
from ..scenario.scenario import RhsPath, Scenario, scenario_hash
from .adaptive import AdaptiveMonitor, start_companion
from .config import CompanionMode
from .output import TimeSeries, snapshot_name, write_manifest, write_snapshot
from .rhs import RateFunction, build_workspace, coalescence_coefficient, make_rate_function
from .spectral import (
    build_spectral_workspace,
    check_spectral_eligible,
    make_spectral_rate_function,
    warn_discontinuous,
)
from .stepper import RunRecord, integrate

logger = logging.getLogger(__name__)

SERIES_FILE = "series.tsv"
MANIFEST_FILE = "manifest.json"


def build_rate_function(scenario: Scenario, grid: Grid, path: RhsPath | None = None):
    """Rate function of the scenario's kernels on the given grid."""
    path = RhsPath(path or scenario.path)
    if path is RhsPath.SPECTRAL:
        check_spectral_eligible(scenario.boundary, scenario.b)
        return make_spectral_rate_function(
            build_spectral_workspace(scenario.a, scenario.phi, grid, scenario.b)
        )
    workspace = build_workspace(scenario.a, scenario.b, scenario.phi, grid, scenario.quadrature)
    return make_rate_function(workspace, scenario.boundary)


class _Recorder:
    """Per-step hook: forwards to the adaptive monitor and fills the time series."""

    def __init__(self, simulation: "Simulation", adaptive: Optional[AdaptiveMonitor]):
        self.simulation = simulation
        self.adaptive = adaptive
        self.series = TimeSeries()
        self.every = simulation.scenario.output.series_every
        integration = simulation.scenario.integration
        self.marks = set(integration.snapshot_steps()) | {integration.steps}
        self._grid: Grid | None = None
        self._rate: RateFunction | None = None
        self._count = 0

    def current_rate(self, state: SolverState) -> RateFunction:
        if state.grid != self._grid:
            self._grid = state.grid
            self._rate = self.simulation.rate_function(state.grid)
        return self._rate

    def record(self, state: SolverState) -> None:
        values = state.field.values
        rates = self.current_rate(state)(values)
        self.series.record(
            state.t, total_mass(state.field), float(values.min()), float(values.max()),
            max_abs_rate(rates),
        )

    def due(self) -> bool:
        if self.every is None:
            return self._count in self.marks
        return self._count % self.every == 0

    def after_step(self, state: SolverState) -> SolverState:
        if self.adaptive is not None:
            state = self.adaptive.after_step(state)
        self._count += 1
        if self.due():
            self.record(state)
        return state

    def rate_function(self, state: SolverState) -> RateFunction:
        return self.current_rate(state)


@dataclass
class RunResult:
    """How a run went and what it left behind."""

    scenario: Scenario
    status: str
    record: Optional[RunRecord] = None
    error: Optional[KineticError] = None
    files: list[Path] = field(default_factory=list)
    series: Optional[pd.DataFrame] = None
    pre_clamp_min: float = float("inf")
    enlargements: list[tuple[float, float, int]] = field(default_factory=list)

    @property
    def final(self) -> Optional[SolverState]:
        return self.record.final if self.record else None


def _status_of(exc: KineticError) -> str:
    if isinstance(exc, DivergenceError):
        return "diverged"
    if isinstance(exc, ResourceLimitError):
        return "resource_limit"
    if isinstance(exc, ObserverError):
        return "observer_failed"
    return "failed"


class Simulation:
    """
    One scenario, ready to run.

    With output_dir set, snapshots, the time series and the manifest are
    written there; without it the run happens in memory only.
    """

    def __init__(self, scenario: Scenario, output_dir: Path | None = None):
        self.scenario = scenario
        self.output_dir = Path(output_dir) if output_dir is not None else None
        self.hash = scenario_hash(scenario)

    def rate_function(self, grid: Grid) -> RateFunction:
        return build_rate_function(self.scenario, grid)

    def initial_state(self) -> SolverState:
        scenario = self.scenario
        field0 = sample_initial(scenario.initial, scenario.grid)
        companion = None
        if scenario.adaptive.enabled and (
            scenario.boundary is BoundaryMode.LEFT_ASYMPTOTIC_RIGHT_DIRICHLET
        ):
            mode = scenario.adaptive.companion
            if mode is CompanionMode.ANALYTIC:
                mu = kernel_mass(scenario.b)
            else:
                workspace = build_workspace(
                    scenario.a, scenario.b, scenario.phi, scenario.grid, scenario.quadrature
                )
                mu = coalescence_coefficient(workspace)
            companion = start_companion(field0.values[0], mu, mode)
        return SolverState(t=0.0, field=field0, boundary=scenario.boundary, companion=companion)

    def run(self, progress_callback: Optional[Callable[[], None]] = None) -> RunResult:
        """Integrate to t_end; KineticErrors are re-raised after outputs are flushed."""
        scenario = self.scenario
        logger.info("🚀 Running %s (hash %s)", scenario.name, self.hash[:12])
        for note in scenario.notes:
            logger.info("Note: %s", note)

        if scenario.path is RhsPath.SPECTRAL and is_discontinuous(scenario.initial):
            warn_discontinuous(scenario.initial.variant)

        result = RunResult(scenario=scenario, status="running")
        state = self.initial_state()

        adaptive = None
        if scenario.adaptive.enabled:
            adaptive = AdaptiveMonitor(
                scenario.adaptive,
                scenario.a,
                scenario.b,
                scenario.phi,
                scenario.quadrature,
                scenario.integration.dt,
                scenario.stepper,
            )
            adaptive.check_start(state)

        recorder = _Recorder(self, adaptive)
        recorder.record(state)

        def save_snapshot(snapshot: SolverState) -> None:
            index = len([f for f in result.files if f.name.startswith("snapshot_")])
            minimum = float(snapshot.field.values.min())
            if self.output_dir is not None:
                path = self.output_dir / snapshot_name(index, snapshot.t)
                minimum = write_snapshot(path, snapshot.field, snapshot.t, self.hash)
                result.files.append(path)
            result.pre_clamp_min = min(result.pre_clamp_min, minimum)

        try:
            result.record = integrate(
                state,
                recorder.current_rate(state),
                scenario.integration,
                scenario.stepper,
                observers=[save_snapshot],
                monitor=recorder,
                progress_callback=progress_callback,
            )
            result.status = "ok"
        except KineticError as exc:
            result.status = _status_of(exc)
            result.error = exc
            logger.error("❌ Run %s stopped: %s", scenario.name, exc)
            raise
        finally:
            result.series = recorder.series.to_frame()
            if adaptive is not None:
                result.enlargements = list(adaptive.enlargements)
            if self.output_dir is not None:
                self._flush(result, recorder)

        final = result.record.final
        logger.info(
            "✨ Finished %s at t=%g on L=%g, N=%d", scenario.name, final.t, final.grid.length,
            final.grid.knots,
        )
        return result

    def _flush(self, result: RunResult, recorder: _Recorder) -> None:
        series_path = self.output_dir / SERIES_FILE
        recorder.series.save(series_path)
        manifest_path = self.output_dir / MANIFEST_FILE
        write_manifest(manifest_path, self.manifest(result))
        result.files.extend([series_path, manifest_path])
        logger.info("💾 Results saved to %s", self.output_dir)

    def manifest(self, result: RunResult) -> dict:
        """Everything needed to reproduce the run and judge its outcome."""
        final = result.record.final if result.record else None
        error = result.error
        return {
            "scenario": self.scenario.to_dict(),
            "scenario_hash": self.hash,
            "status": result.status,
            "error": str(error) if error else None,
            "failed_step": getattr(error, "step_index", None),
            "steps_completed": result.record.steps if result.record else None,
            "final_t": final.t if final else None,
            "final_grid": (
                {"L": final.grid.length, "N": final.grid.knots, "center": final.grid.center}
                if final
                else None
            ),
            "enlargements": [
                {"t": t, "L": length, "N": knots} for t, length, knots in result.enlargements
            ],
            "pre_clamp_min": result.pre_clamp_min if np.isfinite(result.pre_clamp_min) else None,
            "caps": list(self.scenario.notes),
            "snapshots": [f.name for f in result.files if f.name.startswith("snapshot_")],
        }
