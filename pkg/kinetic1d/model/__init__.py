"""
Kernels, grids and density fields: the values every solver path works on.
"""

from .grid import BoundaryMode, Grid, QuadratureRule, build_grid, quadrature_weights
from .initial import sample_initial
from .kernels import KernelShape, KernelSpec, eval_kernel, truncation_radius
from .state import DensityField, SolverState

__all__ = [
    "BoundaryMode",
    "DensityField",
    "Grid",
    "KernelShape",
    "KernelSpec",
    "QuadratureRule",
    "SolverState",
    "build_grid",
    "eval_kernel",
    "quadrature_weights",
    "sample_initial",
    "truncation_radius",
]
