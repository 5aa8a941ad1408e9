"""
A complete, validated description of one simulation.

Scenario bundles every parameter a run needs. Cross-field rules (spectral path
only without coalescence on a periodic domain, adaptive window only on a
non-periodic one, kernels shorter than half the window) are checked together so
that a user sees all problems at once.
"""

import hashlib
import json
from dataclasses import asdict, dataclass, field, fields, is_dataclass
from enum import Enum

from ..errors import ConfigurationError, ParameterError, ScenarioError, ScenarioIssue
from ..model.grid import BoundaryMode, Grid, QuadratureRule
from ..model.initial import ConstantIC, InitialConditionSpec
from ..model.kernels import KernelSpec
from ..solver.config import AdaptiveConfig, IntegrationConfig
from ..solver.rhs import half_range
from ..solver.stepper import StepperKind


class RhsPath(str, Enum):
    """Which evaluator computes the rates."""

    DIRECT = "direct"
    SPECTRAL = "spectral"


@dataclass(frozen=True)
class OutputConfig:
    """
    Where and how results are written. 💾

    By default the time series is written down whenever a snapshot is, plus once
    at the very end.
    """

    directory: str | None = None  # None lets the CLI pick one
    windows: tuple[tuple[float, float], ...] = ()  # Coordinate windows (lo, hi) for error reports
    series_every: int | None = None  # Fixed stride in steps instead of the snapshot times

    def __post_init__(self):
        windows = tuple((float(lo), float(hi)) for lo, hi in self.windows)
        object.__setattr__(self, "windows", windows)
        for lo, hi in windows:
            if not lo < hi:
                raise ParameterError(f"Window [{lo}, {hi}] must have lo < hi")
        if self.series_every is None:
            return
        if int(self.series_every) != self.series_every or self.series_every < 1:
            raise ParameterError(
                f"series_every must be a positive integer, got {self.series_every}"
            )


@dataclass(frozen=True)
class Scenario:
    """Everything needed to reproduce one run."""

    grid: Grid
    name: str = "custom"
    boundary: BoundaryMode = BoundaryMode.PERIODIC
    a: KernelSpec = field(default_factory=KernelSpec)
    b: KernelSpec = field(default_factory=KernelSpec)
    phi: KernelSpec = field(default_factory=KernelSpec)
    initial: InitialConditionSpec = field(default_factory=ConstantIC)
    integration: IntegrationConfig = field(default_factory=IntegrationConfig)
    stepper: StepperKind = StepperKind.RK4
    quadrature: QuadratureRule = QuadratureRule.SIMPSON
    path: RhsPath = RhsPath.DIRECT
    adaptive: AdaptiveConfig = field(default_factory=AdaptiveConfig)
    output: OutputConfig = field(default_factory=OutputConfig)
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "boundary", BoundaryMode(self.boundary))
        object.__setattr__(self, "stepper", StepperKind(self.stepper))
        object.__setattr__(self, "quadrature", QuadratureRule(self.quadrature))
        object.__setattr__(self, "path", RhsPath(self.path))
        object.__setattr__(self, "notes", tuple(self.notes))
        issues = scenario_issues(self)
        if issues:
            raise ScenarioError(issues)

    @property
    def kernels(self) -> tuple[KernelSpec, KernelSpec, KernelSpec]:
        return self.a, self.b, self.phi

    def to_dict(self) -> dict:
        """Every effective parameter, defaults included, as plain JSON data."""
        initial = {"variant": self.initial.variant, **asdict(self.initial)}
        return {
            "name": self.name,
            "grid": {"L": self.grid.length, "N": self.grid.knots, "h": self.grid.h},
            "boundary": self.boundary.value,
            "kernels": {"a": _plain(self.a), "b": _plain(self.b), "phi": _plain(self.phi)},
            "initial": _plain(initial),
            "integration": {
                "stepper": self.stepper.value,
                "dt": self.integration.dt,
                "t_end": self.integration.t_end,
                "snapshots": list(self.integration.snapshot_times),
                "quadrature": self.quadrature.value,
                "path": self.path.value,
            },
            "adaptive": _plain(self.adaptive),
            "output": {
                "windows": [list(w) for w in self.output.windows],
                "series_every": self.output.series_every,
            },
            "notes": list(self.notes),
        }


def _plain(value):
    if isinstance(value, Enum):
        return value.value
    if is_dataclass(value):
        return {f.name: _plain(getattr(value, f.name)) for f in fields(value)}
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (tuple, list)):
        return [_plain(v) for v in value]
    return value


def scenario_issues(scenario: Scenario) -> list[ScenarioIssue]:
    """Cross-field problems of an otherwise well-typed scenario."""
    issues: list[ScenarioIssue] = []

    def issue(section: str, key: str | None, message: str) -> None:
        issues.append(ScenarioIssue(line=None, section=section, key=key, message=message))

    named = (("kernel.a", scenario.a), ("kernel.b", scenario.b), ("kernel.phi", scenario.phi))
    for section, spec in named:
        try:
            half_range(spec, scenario.grid)
        except ConfigurationError as exc:
            issue(section, "sigma", str(exc))

    if scenario.path is RhsPath.SPECTRAL:
        if scenario.b.enabled:
            issue("integration", "path", "spectral path requires b = 0 (set [kernel.b] mu = 0)")
        if scenario.boundary is not BoundaryMode.PERIODIC:
            issue("integration", "path", "spectral path requires periodic boundaries")

    if scenario.adaptive.enabled:
        if scenario.boundary is BoundaryMode.PERIODIC:
            issue("adaptive", "enabled", "adaptive window needs a non-periodic boundary mode")
        if scenario.adaptive.max_knots < scenario.grid.knots:
            issue(
                "adaptive",
                "max_n",
                f"max_n={scenario.adaptive.max_knots} is below the initial N={scenario.grid.knots}",
            )
    return issues


def scenario_hash(scenario: Scenario) -> str:
    """sha256 of the canonical effective parameters."""
    canonical = json.dumps(scenario.to_dict(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()
