"""Hermitian vector bundles over Spec(ℤ) as lattices with rational Gram matrices.

With K = ℚ there is exactly one archimedean place and every projective
ℤ-module is free, so a hermitian bundle of rank N is just ℤ^N together with a
symmetric positive-definite rational Gram matrix.  Sums over places are still
written as loops over :data:`PLACES` so that formulas read the same as in the
number-field case.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg as la
from .loglin import LogValue

#: Archimedean places of K = ℚ.  One real embedding.
PLACES: tuple[str, ...] = ("real",)
#: [K:ℚ]
FIELD_DEGREE = 1


class NotSymmetric(ValueError):
    pass


class NotPositiveDefinite(ValueError):
    def __init__(self, minor_index: int):
        super().__init__(f"leading principal minor {minor_index} is not positive")
        self.minor_index = minor_index


@dataclass(frozen=True, eq=False)
class HermitianLattice:
    gram: tuple[tuple[Fraction, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.gram)

    def matrix(self) -> la.Matrix:
        return [list(r) for r in self.gram]

    def __eq__(self, other) -> bool:
        return isinstance(other, HermitianLattice) and self.gram == other.gram

    def __hash__(self) -> int:
        return hash(self.gram)

    def dual(self) -> "HermitianLattice":
        return lattice_dual(self)

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "rank": self.rank,
            "gram": [[_frac_str(x) for x in row] for row in self.gram],
        }


@dataclass(frozen=True)
class MetrizedLine:
    """A rank-one lattice; ``gram1x1`` is the norm-squared of the generator."""

    gram1x1: Fraction

    def __post_init__(self):
        if Fraction(self.gram1x1) <= 0:
            raise ValueError("metrized line needs a positive norm")

    def degree(self) -> LogValue:
        return LogValue(1 / Fraction(self.gram1x1))


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def lattice_new(gram) -> HermitianLattice:
    g = la.mat(gram)
    n = len(g)
    if n == 0 or any(len(row) != n for row in g):
        raise ValueError("Gram matrix must be square and nonempty")
    if not la.is_symmetric(g):
        raise NotSymmetric("Gram matrix is not symmetric")
    bad = la.first_nonpositive_minor(g)
    if bad is not None:
        raise NotPositiveDefinite(bad)
    return HermitianLattice(tuple(tuple(r) for r in g))


def _trusted(g: la.Matrix) -> HermitianLattice:
    return HermitianLattice(tuple(tuple(r) for r in g))


def arakelov_degree(lat: HermitianLattice) -> LogValue:
    """deĝ(Ē) = −½·ln det(Gram), summed over the places of K."""
    q = Fraction(1)
    for _ in PLACES:
        q *= 1 / la.det(lat.matrix())
    return LogValue(q)


def lattice_dual(lat: HermitianLattice) -> HermitianLattice:
    return _trusted(la.inverse(lat.matrix()))


def lattice_scale(lat: HermitianLattice, c) -> HermitianLattice:
    c = Fraction(c)
    if c <= 0:
        raise ValueError("scale must be positive")
    return _trusted(la.scale(lat.matrix(), c))


def lattice_direct_sum(a: HermitianLattice, b: HermitianLattice) -> HermitianLattice:
    return _trusted(la.block_diag(a.matrix(), b.matrix()))


def change_basis(lat: HermitianLattice, u) -> HermitianLattice:
    """Gram of the basis e'_j = Σᵢ u_ij eᵢ, i.e. uᵀ·G·u."""
    u = la.mat(u)
    return lattice_new(la.matmul(la.matmul(la.transpose(u), lat.matrix()), u))


def lattice_from_json(obj: dict) -> HermitianLattice:
    rows = obj["gram"]
    lat = lattice_new([[Fraction(x) for x in row] for row in rows])
    if "rank" in obj and obj["rank"] != lat.rank:
        raise ValueError(f"rank field {obj['rank']} disagrees with Gram size {lat.rank}")
    return lat
