"""
Result files of a run.

* snapshots: `#` header lines (scenario hash, t, L, N, h, center) followed by
  tab-separated `x` and `n` columns printed with 17 significant digits, so a
  nonnegative field reads back bit for bit
* time series: tab-separated table with columns t, mass, min, max, max_abs_rhs
* manifest: JSON with every effective parameter and how the run ended
"""

import json
from pathlib import Path

import numpy as np
import pandas as pd

from ..errors import ParameterError
from ..model.grid import Grid
from ..model.state import DensityField

SERIES_COLUMNS = ["t", "mass", "min", "max", "max_abs_rhs"]


def snapshot_name(index: int, t: float) -> str:
    return f"snapshot_{index:03d}_t{t:g}.tsv"


def write_snapshot(path: Path, field: DensityField, t: float, scenario_hash: str) -> float:
    """
    Save a density snapshot and return its minimum before clamping.

    Negative round-off values are written as 0; the field itself is untouched.
    """
    grid = field.grid
    values = field.values
    header = "\n".join(
        [
            f"scenario {scenario_hash}",
            f"t {t!r}",
            f"L {grid.length!r}",
            f"N {grid.knots}",
            f"h {grid.h!r}",
            f"center {grid.center!r}",
            "x\tn",
        ]
    )
    table = np.column_stack([grid.coordinates(), np.maximum(values, 0.0)])
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    np.savetxt(path, table, fmt="%.17g", delimiter="\t", header=header, comments="# ")
    return float(values.min())


def read_snapshot(path: Path) -> tuple[DensityField, float, dict[str, str]]:
    """Load a snapshot file back into a field, its time and the raw header."""
    meta: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as f:
        for line in f:
            if not line.startswith("#"):
                break
            key, _, value = line[1:].strip().partition(" ")
            if value:
                meta[key] = value.strip()
    try:
        grid = Grid(
            length=float(meta["L"]), knots=int(meta["N"]), center=float(meta.get("center", 0.0))
        )
        t = float(meta["t"])
    except KeyError as exc:
        raise ParameterError(f"Snapshot {path} lacks header entry {exc}") from None
    table = np.loadtxt(path, comments="#", delimiter="\t", ndmin=2)
    return DensityField(grid=grid, values=table[:, 1]), t, meta


class TimeSeries:
    """Rows of the scalar time series, collected while the run goes."""

    def __init__(self):
        self.rows: list[dict[str, float]] = []

    def record(self, t: float, mass: float, lo: float, hi: float, max_abs_rhs: float) -> None:
        self.rows.append({"t": t, "mass": mass, "min": lo, "max": hi, "max_abs_rhs": max_abs_rhs})

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows, columns=SERIES_COLUMNS)

    def save(self, path: Path) -> None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(path, sep="\t", index=False, float_format="%.17g")


def read_series(path: Path) -> pd.DataFrame:
    return pd.read_csv(path, sep="\t", float_precision="round_trip")


def write_manifest(path: Path, manifest: dict) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
        f.write("\n")


def read_manifest(path: Path) -> dict:
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)
