"""Exact integer/rational polynomials, complex ball arithmetic and certified roots."""

from .ball import Ball, precision, precision_cap
from .poly import IntPoly, cyclotomic, poly_resultant, ratio_poly, squarefree_part
from .roots import RootCluster, certified_roots

__all__ = [
    "Ball",
    "IntPoly",
    "RootCluster",
    "certified_roots",
    "cyclotomic",
    "poly_resultant",
    "precision",
    "precision_cap",
    "ratio_poly",
    "squarefree_part",
]
