"""
Command-line interface for kinetic1d.

Run a scenario file or a preset, study how the error shrinks with h and dt,
and check the FFT path against the direct sums. 🧮
"""

import logging
import sys
from dataclasses import replace
from enum import Enum
from pathlib import Path
from typing import List, Optional

import typer
from rich.console import Console
from rich.logging import RichHandler
from rich.markup import escape
from rich.progress import Progress, SpinnerColumn, TimeElapsedColumn
from rich.table import Table

from kinetic1d.analysis.harness import compare_paths, quadrature_study, sweep_errors
from kinetic1d.errors import KineticError, exit_code_for
from kinetic1d.model.grid import QuadratureRule
from kinetic1d.model.kernels import KernelSpec, truncation_radius
from kinetic1d.scenario.loader import load_scenario
from kinetic1d.scenario.presets import get_preset, preset_names
from kinetic1d.solver.runner import Simulation
from kinetic1d.solver.stepper import StepperKind

app = typer.Typer(
    help="kinetic1d: deterministic solver for 1D repulsion, jump and coalescence kinetics",
    rich_markup_mode="rich",
)
console = Console()


class LogLevel(str, Enum):
    QUIET = "quiet"
    NORMAL = "normal"
    VERBOSE = "verbose"


def setup_logging(level: LogLevel) -> None:
    levels = {LogLevel.QUIET: logging.WARNING, LogLevel.NORMAL: logging.INFO}
    logging.basicConfig(
        level=levels.get(level, logging.DEBUG),
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=console, rich_tracebacks=False, show_path=False)],
        force=True,
    )
    logging.captureWarnings(True)


def _fail(exc: KineticError) -> typer.Exit:
    console.print(f"[bold red]❌ {type(exc).__name__}:[/bold red] {escape(str(exc))}")
    return typer.Exit(code=exit_code_for(exc))


def _progress() -> Progress:
    return Progress(
        SpinnerColumn(),
        *Progress.get_default_columns(),
        TimeElapsedColumn(),
        console=console,
        transient=True,
    )


@app.command()
def run(
    scenario: str = typer.Argument(..., help="Scenario file or preset name"),
    out: Optional[Path] = typer.Option(
        None, "--out", envvar="KINETIC1D_OUTPUT", help="Directory for snapshots and manifest"
    ),
    quiet: bool = typer.Option(False, "--quiet", help="No progress bar, warnings only"),
    verbose: bool = typer.Option(False, "--verbose", help="Debug logging"),
):
    """
    Integrate one scenario and write its result files. 🚀

    Exit status: 0 ok, 2 invalid scenario, 3 divergence, 4 window cap reached.
    """
    setup_logging(LogLevel.VERBOSE if verbose else LogLevel.QUIET if quiet else LogLevel.NORMAL)
    try:
        loaded = load_scenario(scenario)
        if out is not None:
            output_dir = out / loaded.name
        elif loaded.output.directory is not None:
            output_dir = Path(loaded.output.directory)
        else:
            output_dir = Path("runs") / loaded.name
        simulation = Simulation(loaded, output_dir=output_dir)

        console.print(f"\n🧪 Scenario [bold]{loaded.name}[/bold]")
        console.print(
            f"📐 L={loaded.grid.length:g}, N={loaded.grid.knots}, h={loaded.grid.h:g}, "
            f"{loaded.boundary.value} boundaries"
        )
        console.print(
            f"⏱️  {loaded.stepper.value} with dt={loaded.integration.dt:g} "
            f"up to T={loaded.integration.t_end:g}\n"
        )

        if quiet:
            result = simulation.run()
        else:
            with _progress() as progress:
                task = progress.add_task("Integrating...", total=loaded.integration.steps)
                result = simulation.run(progress_callback=lambda: progress.advance(task))
    except KineticError as exc:
        raise _fail(exc) from None

    final = result.final
    console.print(
        f"✅ Done at t={final.t:g} (L={final.grid.length:g}, N={final.grid.knots}, "
        f"{len(result.enlargements)} enlargement(s))"
    )
    console.print(f"💾 Results in {output_dir}")


@app.command("sweep-errors")
def sweep_errors_command(
    scenario: str = typer.Argument(..., help="Base scenario file or preset name"),
    h: List[float] = typer.Option(..., "--h", help="Mesh sizes to sweep (repeatable)"),
    dt: List[float] = typer.Option(..., "--dt", help="Time steps to sweep (repeatable)"),
    ref_h: float = typer.Option(..., "--ref-h", help="Mesh of the reference run"),
    ref_dt: float = typer.Option(..., "--ref-dt", help="Time step of the reference run"),
    stepper: Optional[StepperKind] = typer.Option(None, help="Override the stepper"),
    rule: Optional[QuadratureRule] = typer.Option(None, help="Override the quadrature rule"),
    quadrature: bool = typer.Option(
        False, "--quadrature", help="Also tabulate a single integration of kernel a over h"
    ),
    out: Optional[Path] = typer.Option(None, "--out", help="Write the tables as TSV here"),
    verbose: bool = typer.Option(False, "--verbose", help="Debug logging"),
):
    """
    Error of the solution against a finer reference, for every (h, dt). 📉

    Fits the log-log slopes per region along each axis.
    """
    setup_logging(LogLevel.VERBOSE if verbose else LogLevel.QUIET)
    try:
        base = load_scenario(scenario)
        changes = {}
        if stepper is not None:
            changes["stepper"] = stepper
        if rule is not None:
            changes["quadrature"] = rule
        base = replace(base, **changes)

        console.print(f"\n📊 Sweeping {len(h)} x {len(dt)} cells of {base.name}")
        with _progress() as progress:
            task = progress.add_task("Sweeping...", total=len(h) * len(dt))
            report = sweep_errors(
                base, h, dt, ref_h, ref_dt, progress_callback=lambda: progress.advance(task)
            )

        table = Table(title=f"theta (%) for {base.name}")
        for column in report.table.columns:
            table.add_column(str(column))
        for row in report.table.itertuples(index=False):
            table.add_row(*[f"{v:.4g}" if isinstance(v, float) else str(v) for v in row])
        console.print(table)

        slopes = Table(title="log-log slopes")
        for column in report.slopes.columns:
            slopes.add_column(str(column))
        for row in report.slopes.itertuples(index=False):
            slopes.add_row(*[f"{v:.3g}" if isinstance(v, float) else str(v) for v in row])
        console.print(slopes)

        frames = {"sweep.tsv": report.table, "slopes.tsv": report.slopes}
        if quadrature and base.a.enabled:
            frame, slope = quadrature_study(base.a, truncation_radius(base.a), h, base.quadrature)
            console.print(f"🔢 Single integration of {base.a.label()}: slope {slope:.3f}")
            frames["quadrature.tsv"] = frame
    except KineticError as exc:
        raise _fail(exc) from None

    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        for name, frame in frames.items():
            frame.to_csv(out / name, sep="\t", index=False, float_format="%.17g")
        console.print(f"💾 Tables saved to {out}")


@app.command("compare-paths")
def compare_paths_command(
    scenario: str = typer.Argument(..., help="Periodic scenario without coalescence"),
    verbose: bool = typer.Option(False, "--verbose", help="Debug logging"),
):
    """
    Run a scenario with direct sums and with FFTs and report the difference. ⚖️
    """
    setup_logging(LogLevel.VERBOSE if verbose else LogLevel.QUIET)
    try:
        report = compare_paths(load_scenario(scenario))
    except KineticError as exc:
        raise _fail(exc) from None

    console.print(f"🔍 max |rhs difference|: {report.rhs_difference:.3e}")
    for row in report.trajectory.itertuples(index=False):
        console.print(f"   t={row.t:g}: max |n difference| = {row.max_diff:.3e}")
    console.print(
        f"⏱️  one evaluation: direct {report.direct_seconds * 1e3:.3f} ms, "
        f"spectral {report.spectral_seconds * 1e3:.3f} ms (ratio {report.time_ratio:.3f})"
    )


def _label(spec: KernelSpec) -> str:
    return spec.label() if spec.enabled else "-"


@app.command("list-presets")
def list_presets():
    """Show the built-in scenarios. 📚"""
    table = Table(title="Presets")
    for column in ("name", "boundary", "a", "phi", "b", "T"):
        table.add_column(column)
    for name in preset_names():
        scenario = get_preset(name)
        table.add_row(
            name,
            scenario.boundary.value,
            _label(scenario.a),
            _label(scenario.phi),
            _label(scenario.b),
            f"{scenario.integration.t_end:g}",
        )
    console.print(table)


def main():
    """Entry point of the kinetic1d console script."""
    app()


if __name__ == "__main__":
    sys.exit(main())
