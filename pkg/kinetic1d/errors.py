"""
Exceptions raised by kinetic1d.

Every failure the solver can report has its own class here, so the CLI can turn
it into the right exit status and library users can catch exactly what they
care about.
"""

from dataclasses import dataclass


class KineticError(Exception):
    """Base class for everything kinetic1d raises on purpose."""


class ParameterError(KineticError, ValueError):
    """A single parameter is outside its allowed range."""


class ConfigurationError(ParameterError):
    """Parameters are valid one by one but do not fit together."""


class ContractError(KineticError):
    """A caller broke a documented precondition."""


class DivergenceError(KineticError):
    """The integrator produced non-finite densities."""

    def __init__(self, step_index: int, t: float, stage: int | None = None):
        self.step_index = step_index
        self.t = t
        self.stage = stage
        where = f" (stage {stage})" if stage is not None else ""
        super().__init__(
            f"Non-finite density at step {step_index}{where}, t={t:g}; "
            "try a smaller time step"
        )


class ResourceLimitError(KineticError):
    """The adaptive domain would grow past its knot cap."""


class ObserverError(KineticError):
    """An observer raised while the run was in progress."""


class MetricError(KineticError, ValueError):
    """A diagnostic metric is undefined for the data it was given."""


@dataclass(frozen=True)
class ScenarioIssue:
    """One problem found while reading a scenario file."""

    line: int | None
    section: str
    key: str | None
    message: str

    def __str__(self) -> str:
        where = f"line {self.line}: " if self.line is not None else ""
        target = f"[{self.section}]" + (f" {self.key}" if self.key else "")
        return f"{where}{target}: {self.message}"


class ScenarioError(ParameterError):
    """A scenario failed validation; `issues` lists every violation found."""

    def __init__(self, issues: list[ScenarioIssue]):
        self.issues = list(issues)
        lines = "\n".join(f"  - {issue}" for issue in self.issues)
        super().__init__(f"Scenario has {len(self.issues)} problem(s):\n{lines}")


EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_DIVERGENCE = 3
EXIT_RESOURCE = 4


def exit_code_for(exc: BaseException) -> int:
    """Map an exception to the CLI exit status."""
    if isinstance(exc, DivergenceError):
        return EXIT_DIVERGENCE
    if isinstance(exc, ResourceLimitError):
        return EXIT_RESOURCE
    if isinstance(exc, (ParameterError, ContractError)):
        return EXIT_VALIDATION
    return 1
