"""
Density and solver state representation.

Both types are frozen, so a state handed to an observer can never change under
its feet while the integrator moves on.
"""

from dataclasses import dataclass, replace
from typing import TYPE_CHECKING, Optional

import numpy as np

from ..errors import ParameterError
from .grid import BoundaryMode, Grid

if TYPE_CHECKING:
    from ..solver.adaptive import HomogeneousCompanion


@dataclass(frozen=True)
class DensityField:
    """
    Number density n_1..n_N at the knots of a grid at one instant.

    The values array is stored read-only; build a new field to change it.
    """

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 1 or values.size != self.grid.knots:
            raise ParameterError(
                f"Density needs {self.grid.knots} values, got shape {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise ParameterError("Density values must be finite")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    def with_values(self, values: np.ndarray) -> "DensityField":
        return DensityField(grid=self.grid, values=values)

    def coordinates(self) -> np.ndarray:
        return self.grid.coordinates()

    def __str__(self) -> str:
        return (
            f"DensityField(L={self.grid.length:g}, N={self.grid.knots}, "
            f"min={self.values.min():.6g}, max={self.values.max():.6g})"
        )


@dataclass(frozen=True)
class SolverState:
    """
    Everything the time loop carries from one step to the next.

    Attributes:
        t: current time
        field: density at time t
        boundary: boundary mode in force
        companion: homogeneous companion track, present in adaptive runs
    """

    t: float
    field: DensityField
    boundary: BoundaryMode
    companion: Optional["HomogeneousCompanion"] = None

    @property
    def grid(self) -> Grid:
        return self.field.grid

    def advanced(self, t: float, values: np.ndarray) -> "SolverState":
        """A new state at time t holding the given knot values."""
        return replace(self, t=t, field=self.field.with_values(values))
