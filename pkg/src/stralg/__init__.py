"""Order types of hammocks over string algebras."""

from .bands import band_structure, compute_qba, enumerate_prime_bands
from .completion import classify_limit_location, complete_catalog, converge, gap_census
from .condensation import BContext, band_ends, b_equivalent, beam_structure, is_center, plain_limit
from .hammock import HammockKey, compare_l, enumerate_hammock, pred_l, succ_l
from .ordertype import expr_equal, hammock_order_type, normalize_expr, parse_expr, prefix_check, render_expr
from .presentation import load_algebra, parse_algebra, solve_signs, validate_algebra
from .strings import h_equivalent, parse_string, render

__all__ = [
    "BContext",
    "HammockKey",
    "b_equivalent",
    "band_ends",
    "band_structure",
    "beam_structure",
    "classify_limit_location",
    "compare_l",
    "complete_catalog",
    "compute_qba",
    "converge",
    "enumerate_hammock",
    "enumerate_prime_bands",
    "expr_equal",
    "gap_census",
    "h_equivalent",
    "hammock_order_type",
    "is_center",
    "load_algebra",
    "normalize_expr",
    "parse_algebra",
    "parse_expr",
    "parse_string",
    "plain_limit",
    "prefix_check",
    "pred_l",
    "render",
    "render_expr",
    "solve_signs",
    "succ_l",
    "validate_algebra",
]
