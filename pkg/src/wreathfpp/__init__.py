"""Exact fixed-point proportions of iterated wreath products acting on regular rooted trees."""

from .charpoly import (
    DerangementProfile,
    FppValue,
    RationalPoly,
    char_polynomial,
    fpp_from_profile,
    fpp_of_set,
    profile,
)
from .errors import (
    InternalInvariantError,
    ResourceLimitError,
    ValidationError,
    WreathFPPError,
)
from .estimator import WreathFPP
from .gqp import GqpSpec, fpp_gqp, gqp_report, validate_gqp
from .permgroup import Perm, PermSet, generate, parse_perm, parse_perm_list, perm_set

__version__ = "0.1.0"

__all__ = [
    "DerangementProfile", "FppValue", "RationalPoly", "char_polynomial",
    "fpp_from_profile", "fpp_of_set", "profile",
    "InternalInvariantError", "ResourceLimitError", "ValidationError", "WreathFPPError",
    "WreathFPP", "GqpSpec", "fpp_gqp", "gqp_report", "validate_gqp",
    "Perm", "PermSet", "generate", "parse_perm", "parse_perm_list", "perm_set",
]
