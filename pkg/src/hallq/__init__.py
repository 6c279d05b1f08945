"""Exact Ringel-Hall algebra workbench for quivers over small prime fields."""

from .config import SUPPORTED_PRIMES, RunConfig
from .errors import (CapacityError, HallError, QuiverSyntaxError,
                     UnsupportedCategoryError, ValidationError)
from .gfp import BACKEND, Subspace, gaussian_binomial
from .hall import Context, HallElement, hall_number, hall_product, twisted_product
from .laurent import LaurentPoly
from .quiver import Quiver, classify_shape, parse_quiver, predict
from .reps import Representation, decompose, direct_sum, hom_space, is_isomorphic

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "CapacityError", "Context", "HallElement", "HallError",
    "LaurentPoly", "Quiver", "QuiverSyntaxError", "Representation",
    "RunConfig", "SUPPORTED_PRIMES", "Subspace", "UnsupportedCategoryError",
    "ValidationError", "classify_shape", "decompose", "direct_sum",
    "gaussian_binomial", "hall_number", "hall_product", "hom_space",
    "is_isomorphic", "parse_quiver", "predict", "twisted_product",
]
