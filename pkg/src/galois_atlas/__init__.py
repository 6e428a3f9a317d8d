"""Exact tools for the surjectivity of l-adic Galois images of elliptic curves over Q."""

from .algebra import INF, BiPoly, RatFunc, UniPoly, rational_roots
from .atlas import AtlasData, load_atlas
from .elliptic import EllCurveQ
from .galois import GaloisReport, analyze, mod7_sieve, nonsurjective_ell_adic

__version__ = "0.1.0"

__all__ = [
    "INF", "BiPoly", "RatFunc", "UniPoly", "rational_roots", "AtlasData", "load_atlas",
    "EllCurveQ", "GaloisReport", "analyze", "mod7_sieve", "nonsurjective_ell_adic",
]
