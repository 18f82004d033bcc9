"""Numerical laboratory for constrained ground states and orbital stability
of a coupled two-component nonlinear Schrodinger system."""

from .grid import Field, GridSpec, Pair
from .model import EnergyBreakdown, ModelParams
from .minimizer import GroundState, SolverConfig

__all__ = [
    "Field",
    "GridSpec",
    "Pair",
    "EnergyBreakdown",
    "ModelParams",
    "GroundState",
    "SolverConfig",
]

__version__ = "0.1.0"
