"""
Reading scenario files.

The format is INI text:

    [scenario]      name, preset (start from a preset and override it), notes
    [grid]          l, n
    [boundary]      mode
    [kernel.a]      shape, mu, sigma, shift, cutoff   (same for kernel.b and kernel.phi)
    [initial]       variant, mirrored and the parameters of that variant
    [integration]   stepper, dt, t_end, snapshots, quadrature, path
    [adaptive]      enabled, epsilon, max_n, companion
    [output]        directory, windows (lo:hi, ...), series_every

Keys are case-insensitive, `#` and `;` start comments. Every problem found is
collected with its line number before a ScenarioError is raised.
"""

import configparser
import dataclasses
import re
from pathlib import Path
from typing import Any, Callable

from ..errors import KineticError, ParameterError, ScenarioError, ScenarioIssue
from ..model.grid import BoundaryMode, Grid, QuadratureRule
from ..model.initial import INITIAL_CONDITIONS, ConstantIC
from ..model.kernels import KernelShape, KernelSpec
from ..solver.config import AdaptiveConfig, CompanionMode, IntegrationConfig
from ..solver.stepper import StepperKind
from .presets import PRESETS, get_preset
from .scenario import OutputConfig, RhsPath, Scenario, scenario_issues

KERNEL_KEYS = {"shape", "mu", "sigma", "shift", "cutoff"}
KNOWN_KEYS: dict[str, set[str]] = {
    "scenario": {"name", "preset", "notes"},
    "grid": {"l", "n"},
    "boundary": {"mode"},
    "kernel.a": KERNEL_KEYS,
    "kernel.b": KERNEL_KEYS,
    "kernel.phi": KERNEL_KEYS,
    "initial": {
        "variant", "mirrored", "v", "sigma", "amplitudes", "ranges", "n0", "mu0", "k", "mu"
    },
    "integration": {"stepper", "dt", "t_end", "snapshots", "quadrature", "path"},
    "adaptive": {"enabled", "epsilon", "max_n", "companion"},
    "output": {"directory", "windows", "series_every"},
}

_SECTION = re.compile(r"^\s*\[([^\]]+)\]")
_KEY = re.compile(r"^([^#;=:\s][^=:]*?)\s*[=:]")


class _Unset:
    pass


UNSET = _Unset()


def _line_map(text: str) -> dict[tuple[str, str | None], int]:
    """Line number of every section header and every key in it."""
    lines: dict[tuple[str, str | None], int] = {}
    section = None
    for number, line in enumerate(text.splitlines(), start=1):
        header = _SECTION.match(line)
        if header:
            section = header.group(1).strip()
            lines.setdefault((section, None), number)
            continue
        key = _KEY.match(line)
        if key and section is not None:
            lines.setdefault((section, key.group(1).strip().lower()), number)
    return lines


def _float(text: str) -> float:
    return float(text)


def _int(text: str) -> int:
    value = float(text)
    if value != int(value):
        raise ValueError(f"expected an integer, got {text!r}")
    return int(value)


def _bool(text: str) -> bool:
    states = configparser.ConfigParser.BOOLEAN_STATES
    if text.lower() not in states:
        raise ValueError(f"expected true/false, got {text!r}")
    return states[text.lower()]


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(part) for part in re.split(r"[,\s]+", text.strip()) if part)


def _windows(text: str) -> tuple[tuple[float, float], ...]:
    windows = []
    for part in re.split(r"[,\s]+", text.strip()):
        if not part:
            continue
        lo, sep, hi = part.partition(":")
        if not sep:
            raise ValueError(f"window {part!r} must look like lo:hi")
        windows.append((float(lo), float(hi)))
    return tuple(windows)


def _enum(kind: type) -> Callable[[str], Any]:
    def convert(text: str):
        try:
            return kind(text.strip().lower())
        except ValueError:
            choices = ", ".join(member.value for member in kind)
            raise ValueError(f"expected one of {choices}, got {text!r}") from None

    return convert


_IC_CONVERTERS: dict[str, Callable[[str], Any]] = {
    "mirrored": _bool,
    "amplitudes": _floats,
    "ranges": _floats,
    "k": _int,
}


class _Reader:
    """Typed access to the parsed file that records problems instead of raising."""

    def __init__(self, parser: configparser.ConfigParser, lines: dict):
        self.parser = parser
        self.lines = lines
        self.issues: list[ScenarioIssue] = []

    def issue(self, section: str, key: str | None, message: str) -> None:
        line = self.lines.get((section, key)) or self.lines.get((section, None))
        self.issues.append(ScenarioIssue(line=line, section=section, key=key, message=message))

    def has(self, section: str, key: str) -> bool:
        return self.parser.has_option(section, key)

    def get(self, section: str, key: str, convert: Callable[[str], Any], default: Any = UNSET):
        if not self.has(section, key):
            return default
        raw = self.parser.get(section, key)
        try:
            return convert(raw)
        except (ValueError, TypeError) as exc:
            self.issue(section, key, str(exc) if str(exc) else f"cannot read {raw!r}")
            return default

    def build(self, section: str, factory: Callable[..., Any], **kwargs) -> Any:
        """Construct a config object, turning its validation error into an issue."""
        try:
            return factory(**kwargs)
        except (KineticError, ValueError, TypeError) as exc:
            self.issue(section, None, str(exc))
            return None


def _check_keys(reader: _Reader) -> None:
    for section in reader.parser.sections():
        if section not in KNOWN_KEYS:
            reader.issue(section, None, f"unknown section; expected one of {', '.join(KNOWN_KEYS)}")
            continue
        for key in reader.parser.options(section):
            if key not in KNOWN_KEYS[section]:
                reader.issue(section, key, "unknown key")


def _kernel(reader: _Reader, section: str, base: KernelSpec) -> KernelSpec | None:
    if not reader.parser.has_section(section):
        return base
    return reader.build(
        section,
        KernelSpec,
        shape=reader.get(section, "shape", _enum(KernelShape), base.shape),
        mu=reader.get(section, "mu", _float, base.mu),
        sigma=reader.get(section, "sigma", _float, base.sigma),
        shift=reader.get(section, "shift", _float, base.shift),
        cutoff=reader.get(section, "cutoff", _float, base.cutoff),
    )


def _initial(reader: _Reader, base):
    section = "initial"
    if not reader.parser.has_section(section):
        return base
    variant = reader.get(section, "variant", lambda t: t.strip().lower(), base.variant)
    if variant not in INITIAL_CONDITIONS:
        reader.issue(section, "variant", f"expected one of {', '.join(INITIAL_CONDITIONS)}")
        return None
    cls = INITIAL_CONDITIONS[variant]
    defaults = dataclasses.asdict(base) if type(base) is cls else {}
    names = {f.name for f in dataclasses.fields(cls)}
    kwargs = {}
    for key in reader.parser.options(section):
        if key == "variant" or key not in KNOWN_KEYS[section]:
            continue
        if key not in names:
            reader.issue(section, key, f"not a parameter of the {variant} profile")
            continue
        kwargs[key] = reader.get(section, key, _IC_CONVERTERS.get(key, _float))
    merged = {**defaults, **{k: v for k, v in kwargs.items() if v is not UNSET}}
    return reader.build(section, cls, **merged)


def _integration(reader: _Reader, base: Scenario | None):
    section = "integration"
    cfg = base.integration if base else IntegrationConfig()
    dt = reader.get(section, "dt", _float, cfg.dt)
    t_end = reader.get(section, "t_end", _float, cfg.t_end)
    if reader.has(section, "snapshots"):
        snapshots = reader.get(section, "snapshots", _floats, ())
    elif base is not None and t_end == cfg.t_end:
        snapshots = cfg.snapshot_times
    else:
        snapshots = (0.0, t_end) if t_end > 0 else (0.0,)
    return reader.build(section, IntegrationConfig, dt=dt, t_end=t_end, snapshot_times=snapshots)


def parse_scenario(text: str, source: str = "<scenario>") -> Scenario:
    """
    Parse INI text into a validated Scenario.

    Raises ScenarioError listing every unknown key, unreadable value and
    violated constraint, each with the line it comes from.
    """
    parser = configparser.ConfigParser(
        interpolation=None, inline_comment_prefixes=("#", ";"), strict=True
    )
    try:
        parser.read_string(text, source=source)
    except configparser.ParsingError as exc:
        raise ScenarioError(
            [
                ScenarioIssue(n, "?", None, f"cannot parse {raw.strip()!r}")
                for n, raw in exc.errors
            ]
        ) from exc
    except configparser.Error as exc:
        line = getattr(exc, "lineno", None)
        issue = ScenarioIssue(line=line, section="?", key=None, message=str(exc))
        raise ScenarioError([issue]) from exc

    reader = _Reader(parser, _line_map(text))
    _check_keys(reader)

    base = None
    preset = reader.get("scenario", "preset", lambda t: t.strip().lower(), None)
    if preset is not None:
        try:
            base = get_preset(preset)
        except ParameterError as exc:
            reader.issue("scenario", "preset", str(exc))

    name = reader.get("scenario", "name", str.strip, base.name if base else "custom")

    grid = base.grid if base else None
    if parser.has_section("grid") or base is None:
        length = reader.get("grid", "l", _float, grid.length if grid else UNSET)
        knots = reader.get("grid", "n", _int, grid.knots if grid else UNSET)
        if length is UNSET or knots is UNSET:
            missing = "l" if length is UNSET else "n"
            reader.issue("grid", missing, "required: the scenario needs [grid] l and n")
            grid = None
        else:
            grid = reader.build("grid", Grid, length=length, knots=knots)

    boundary = reader.get(
        "boundary", "mode", _enum(BoundaryMode), base.boundary if base else BoundaryMode.PERIODIC
    )
    a = _kernel(reader, "kernel.a", base.a if base else KernelSpec())
    b = _kernel(reader, "kernel.b", base.b if base else KernelSpec())
    phi = _kernel(reader, "kernel.phi", base.phi if base else KernelSpec())
    initial = _initial(reader, base.initial if base else ConstantIC())
    integration = _integration(reader, base)

    stepper = reader.get(
        "integration", "stepper", _enum(StepperKind), base.stepper if base else StepperKind.RK4
    )
    quadrature = reader.get(
        "integration",
        "quadrature",
        _enum(QuadratureRule),
        base.quadrature if base else QuadratureRule.SIMPSON,
    )
    path = reader.get("integration", "path", _enum(RhsPath), base.path if base else RhsPath.DIRECT)

    adaptive_base = base.adaptive if base else AdaptiveConfig()
    adaptive = adaptive_base
    if parser.has_section("adaptive"):
        adaptive = reader.build(
            "adaptive",
            AdaptiveConfig,
            enabled=reader.get("adaptive", "enabled", _bool, adaptive_base.enabled),
            epsilon=reader.get("adaptive", "epsilon", _float, adaptive_base.epsilon),
            max_knots=reader.get("adaptive", "max_n", _int, adaptive_base.max_knots),
            companion=reader.get(
                "adaptive", "companion", _enum(CompanionMode), adaptive_base.companion
            ),
        )

    output_base = base.output if base else OutputConfig()
    output = output_base
    if parser.has_section("output"):
        output = reader.build(
            "output",
            OutputConfig,
            directory=reader.get("output", "directory", str.strip, output_base.directory),
            windows=reader.get("output", "windows", _windows, output_base.windows),
            series_every=reader.get("output", "series_every", _int, output_base.series_every),
        )

    notes = base.notes if base else ()
    if reader.has("scenario", "notes"):
        notes = notes + (parser.get("scenario", "notes").strip(),)

    parts = dict(
        name=name,
        grid=grid,
        boundary=boundary,
        a=a,
        b=b,
        phi=phi,
        initial=initial,
        integration=integration,
        stepper=stepper,
        quadrature=quadrature,
        path=path,
        adaptive=adaptive,
        output=output,
        notes=notes,
    )
    if reader.issues or any(value is None for value in parts.values()):
        raise ScenarioError(reader.issues)

    # cross-field rules need a fully typed candidate
    candidate = object.__new__(Scenario)
    for key, value in parts.items():
        object.__setattr__(candidate, key, value)
    for issue in scenario_issues(candidate):
        reader.issue(issue.section, issue.key, issue.message)
    if reader.issues:
        raise ScenarioError(reader.issues)
    return Scenario(**parts)


def load_scenario(source: str | Path) -> Scenario:
    """A preset by name, or a scenario file by path."""
    text = str(source)
    if text.lower() in PRESETS:
        return get_preset(text)
    path = Path(source)
    if not path.is_file():
        raise ScenarioError(
            [
                ScenarioIssue(
                    line=None,
                    section="scenario",
                    key=None,
                    message=f"{text!r} is neither a preset ({', '.join(PRESETS)}) nor a file",
                )
            ]
        )
    try:
        content = path.read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise ScenarioError(
            [
                ScenarioIssue(
                    line=None,
                    section="scenario",
                    key=None,
                    message=f"{text!r} is not UTF-8 text (byte {exc.start})",
                )
            ]
        ) from exc
    return parse_scenario(content, source=str(path))
