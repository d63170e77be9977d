"""Exact moments of the Hermitian Jacobi process and their applications."""
from .capacity import CapacityResult, capacity_series, capacity_stationary
from .errors import CalibrationError, DomainError, PrecisionError, SimulationFault
from .hypergeometric import moment_via_4f3
from .moments import MomentExpansion, moment_expansion, moment_mf1_oracle, stationary_moment
from .partitions import Hook, ModelParams

__version__ = "0.1.0"

__all__ = [
    "CapacityResult",
    "capacity_series",
    "capacity_stationary",
    "CalibrationError",
    "DomainError",
    "PrecisionError",
    "SimulationFault",
    "moment_via_4f3",
    "MomentExpansion",
    "moment_expansion",
    "moment_mf1_oracle",
    "stationary_moment",
    "Hook",
    "ModelParams",
]
