"""Exact Arakelov heights and GIT semistability on projective tensor bundles over Spec(ℤ)."""

__version__ = "0.1.0"

from .hermlat import HermitianLattice, arakelov_degree, lattice_new
from .heights import point_height, rep_constant, theorem1_check, theorem2_floor, drift_sequence
from .loglin import LogValue, lv_affine_compare, lv_from_rational, lv_to_float
from .reps import (
    Adjoint,
    CompactifiedRep,
    DetPower,
    DirectSum,
    Dual,
    Standard,
    Sym,
    Tensor,
    Wedge,
    induced_gram,
)
from .semistab import OnePS, PointInP, adjoint_invariants, adjoint_semistable, torus_semistable

__all__ = [
    "Adjoint",
    "CompactifiedRep",
    "DetPower",
    "DirectSum",
    "Dual",
    "HermitianLattice",
    "LogValue",
    "OnePS",
    "PointInP",
    "Standard",
    "Sym",
    "Tensor",
    "Wedge",
    "adjoint_invariants",
    "adjoint_semistable",
    "arakelov_degree",
    "drift_sequence",
    "induced_gram",
    "lattice_new",
    "lv_affine_compare",
    "lv_from_rational",
    "lv_to_float",
    "point_height",
    "rep_constant",
    "theorem1_check",
    "theorem2_floor",
    "torus_semistable",
]
