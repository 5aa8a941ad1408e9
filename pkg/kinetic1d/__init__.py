"""kinetic1d: deterministic solver for the 1D repulsion, jump and coalescence kinetic equation."""

__version__ = "0.1.0"
