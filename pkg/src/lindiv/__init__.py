"""Linear division sequences: exact construction, checking and decomposition."""

from .exactnum import AlgNum, UniPoly, UniPolyQ, cyclotomic, poly_gcd, poly_lcm

__version__ = "0.1.0"

__all__ = ["AlgNum", "UniPoly", "UniPolyQ", "cyclotomic", "poly_gcd", "poly_lcm"]
