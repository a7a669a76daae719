"""Twisted sums of cusp form coefficients: exact tables, Voronoi checks, moments."""

from .coeffs import CoeffTable, build_cusp_form, divisor_tables
from .sums import PrefixCache, Twist, build_prefix_cache, long_sum, short_sum

__version__ = "0.1.0"

__all__ = [
    "CoeffTable",
    "PrefixCache",
    "Twist",
    "build_cusp_form",
    "build_prefix_cache",
    "divisor_tables",
    "long_sum",
    "short_sum",
]
