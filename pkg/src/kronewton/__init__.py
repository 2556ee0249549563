"""Certified approximate zeros, Kronecker solutions and the conversions between them."""

from .exact_arith import GaussianRational, PadicApprox, Place, height, product_formula
from .galois import galois_order, lagrange_resolvent, universal_system
from .kronecker import (
    GeometricSolution,
    approx_to_kronecker,
    hensel_specialize,
    kronecker_to_approx,
    solve_geometric,
    verify_geometric,
)
from .lattice import lll_reduce, min_poly_from_approx, rational_reconstruct
from .newton import certify, enclose_zero, gamma, hensel_certify, mignotte_system, run_newton
from .polysys import MultiPoly, PolySystem, Slp
from .witness import is_zero_slp, witness_point

__all__ = [
    "GaussianRational",
    "GeometricSolution",
    "MultiPoly",
    "PadicApprox",
    "Place",
    "PolySystem",
    "Slp",
    "approx_to_kronecker",
    "certify",
    "enclose_zero",
    "galois_order",
    "gamma",
    "height",
    "hensel_certify",
    "hensel_specialize",
    "is_zero_slp",
    "kronecker_to_approx",
    "lagrange_resolvent",
    "lll_reduce",
    "mignotte_system",
    "min_poly_from_approx",
    "product_formula",
    "rational_reconstruct",
    "run_newton",
    "solve_geometric",
    "universal_system",
    "verify_geometric",
    "witness_point",
]
