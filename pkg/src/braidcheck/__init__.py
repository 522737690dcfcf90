"""braidcheck: exact verification of compatible braidings, generalized
Yangians, braided r-matrices and braided KZ systems."""

from .scalars import Q, Laurent, RatFunc, parse_scalar, format_scalar, qnumber
from .tensor import TensorOp, PositionContext, place, embed_ov_single, embed_ov_pair, partial_trace
from .braidings import (
    Braiding, BraidingPair, catalog, catalog_names, parse_braiding_spec, check_braid,
    classify_symmetry, check_compatible, check_braided_ybe, make_pair, skew_inverse, f_trace,
)
from .report import CheckReport, SuiteReport

__version__ = "0.1.0"

__all__ = [
    "Q", "Laurent", "RatFunc", "parse_scalar", "format_scalar", "qnumber",
    "TensorOp", "PositionContext", "place", "embed_ov_single", "embed_ov_pair", "partial_trace",
    "Braiding", "BraidingPair", "catalog", "catalog_names", "parse_braiding_spec", "check_braid",
    "classify_symmetry", "check_compatible", "check_braided_ybe", "make_pair", "skew_inverse", "f_trace",
    "CheckReport", "SuiteReport",
]
