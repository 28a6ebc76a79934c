"""Multiple orthogonal polynomials of a two-measure system on a
three-ray star: finite-n tables, limit objects and their verification."""

from .asymptotics import AsymptoticsSuite
from .config import StarConfig, reference_config
from .equilibrium import solve_equilibrium, solve_star_equilibrium
from .errors import (ArtifactError, ConfigError, DomainError,
                     HypothesisViolation, NonConvergenceError,
                     SingularityError, StarmopError)
from .moments import MomentService
from .mop_core import PolyTable, RecurrenceTable, check_interlacing
from .report import ComputeBundle, run_compute, run_verify
from .second_kind import SecondKindTable
from .surface import SurfaceModel

__version__ = "0.1.0"

__all__ = [
    "ArtifactError", "AsymptoticsSuite", "ComputeBundle", "ConfigError",
    "DomainError", "HypothesisViolation", "MomentService",
    "NonConvergenceError", "PolyTable", "RecurrenceTable",
    "SecondKindTable", "SingularityError", "StarConfig", "StarmopError",
    "SurfaceModel", "check_interlacing", "reference_config",
    "run_compute", "run_verify", "solve_equilibrium",
    "solve_star_equilibrium", "__version__",
]
