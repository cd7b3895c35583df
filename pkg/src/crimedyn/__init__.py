"""Numerical laboratory for a four-compartment imitation-driven crime model."""
from .errors import CrimeDynError, InadmissibleError, IntegrationError, NumericalError, ParameterError
from .model import ModelParams, Region, StateVec, load_params, rhs

__version__ = "0.1.0"

__all__ = [
    "CrimeDynError",
    "InadmissibleError",
    "IntegrationError",
    "ModelParams",
    "NumericalError",
    "ParameterError",
    "Region",
    "StateVec",
    "__version__",
    "load_params",
    "rhs",
]
