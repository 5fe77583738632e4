"""Representations of GL_N given by construction trees, and metric transport.

A :class:`RepTree` describes a representation W of GL_N together with a fixed
ℤ-basis of W.  From a Gram matrix G on ℤ^N every constructor produces a Gram
matrix on W, functorially:

========== ==================================================================
Standard   G
Dual       G⁻¹ (dual basis)
Tensor     Kronecker product
DirectSum  orthogonal sum
Wedge(k)   k-th compound of G (k×k minors)
Sym(n)     quotient metric of W^{⊗n} ↠ Symⁿ W, computed on the dual side
DetPower   det(G)^k on the line ∧^N
Adjoint    restriction of G ⊗ G⁻¹ to the trace-zero sublattice of End
========== ==================================================================

Basis orders
------------
* Sym(n, t): monomials as sorted index tuples (``combinations_with_replacement``).
* Wedge(k, t): sorted index sets (``combinations``).
* Tensor(s, t): row-major pairs (i of s, j of t).
* DirectSum(s, t): basis of s then basis of t.
* Adjoint(N): E_ij for i ≠ j in row-major order, then H_i = E_ii − E_{i+1,i+1}.

Weights are exponent vectors of the diagonal torus; a constructor is
homogeneous of degree a exactly when all its weights have coordinate sum a.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from math import factorial
from typing import Union

from . import linalg as la
from .hermlat import HermitianLattice, _trusted
from .loglin import LogValue, Ordering, lv_affine_compare


class RankMismatch(ValueError):
    pass


class OrthogonalityViolation(AssertionError):
    pass


class DivisibilityFailure(ValueError):
    pass


class NotHomogeneous(ValueError):
    pass


# -- construction trees -------------------------------------------------------


@dataclass(frozen=True)
class Standard:
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("Standard(N) needs N >= 1")


@dataclass(frozen=True)
class Dual:
    of: "RepTree"


@dataclass(frozen=True)
class Sym:
    n: int
    of: "RepTree"

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("symmetric power must be nonnegative")


@dataclass(frozen=True)
class Wedge:
    k: int
    of: "RepTree"

    def __post_init__(self):
        if not 0 <= self.k <= rep_dimension(self.of):
            raise ValueError(f"Wedge({self.k}) exceeds dimension {rep_dimension(self.of)}")


@dataclass(frozen=True)
class Tensor:
    left: "RepTree"
    right: "RepTree"

    def __post_init__(self):
        _same_rank(self.left, self.right)


@dataclass(frozen=True)
class DirectSum:
    left: "RepTree"
    right: "RepTree"

    def __post_init__(self):
        _same_rank(self.left, self.right)


@dataclass(frozen=True)
class DetPower:
    n: int
    k: int


@dataclass(frozen=True)
class Adjoint:
    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("Adjoint(N) needs N >= 2")


RepTree = Union[Standard, Dual, Sym, Wedge, Tensor, DirectSum, DetPower, Adjoint]


def _same_rank(a: RepTree, b: RepTree) -> None:
    if leaf_rank(a) != leaf_rank(b):
        raise RankMismatch(f"leaves disagree on N: {leaf_rank(a)} vs {leaf_rank(b)}")


def leaf_rank(t: RepTree) -> int:
    if isinstance(t, (Standard, DetPower, Adjoint)):
        return t.n
    if isinstance(t, (Dual, Sym, Wedge)):
        return leaf_rank(t.of)
    return leaf_rank(t.left)


@dataclass(frozen=True)
class CompactifiedRep:
    """A representation tree plus the scalar multiplying its natural metric."""

    tree: RepTree
    scale: Fraction = Fraction(1)

    def __post_init__(self):
        s = Fraction(self.scale)
        if s <= 0:
            raise ValueError("compactification scale must be positive")
        object.__setattr__(self, "scale", s)


def as_crep(t: RepTree | CompactifiedRep) -> CompactifiedRep:
    return t if isinstance(t, CompactifiedRep) else CompactifiedRep(t)


# -- dimensions, labels, weights ----------------------------------------------


def rep_dimension(t: RepTree) -> int:
    if isinstance(t, Standard):
        return t.n
    if isinstance(t, Dual):
        return rep_dimension(t.of)
    if isinstance(t, Sym):
        m = rep_dimension(t.of)
        return len(list(combinations_with_replacement(range(m), t.n)))
    if isinstance(t, Wedge):
        return len(list(combinations(range(rep_dimension(t.of)), t.k)))
    if isinstance(t, Tensor):
        return rep_dimension(t.left) * rep_dimension(t.right)
    if isinstance(t, DirectSum):
        return rep_dimension(t.left) + rep_dimension(t.right)
    if isinstance(t, DetPower):
        return 1
    if isinstance(t, Adjoint):
        return t.n * t.n - 1
    raise TypeError(t)


def _sym_basis(t: Sym) -> list[tuple[int, ...]]:
    return list(combinations_with_replacement(range(rep_dimension(t.of)), t.n))


def _wedge_basis(t: Wedge) -> list[tuple[int, ...]]:
    return list(combinations(range(rep_dimension(t.of)), t.k))


def _adjoint_basis(n: int) -> list[tuple[str, int, int]]:
    offdiag = [("E", i, j) for i in range(n) for j in range(n) if i != j]
    return offdiag + [("H", i, i + 1) for i in range(n - 1)]


def _wrap(label: str) -> str:
    return f"({label})" if any(c in label for c in "⊗∧·⊕") else label


def basis_labels(t: RepTree) -> list[str]:
    if isinstance(t, Standard):
        return [f"e{i + 1}" for i in range(t.n)]
    if isinstance(t, Dual):
        return [f"{_wrap(x)}*" for x in basis_labels(t.of)]
    if isinstance(t, Sym):
        child = [_wrap(x) for x in basis_labels(t.of)]
        if t.n == 0:
            return ["1"]
        out = []
        for mono in _sym_basis(t):
            parts = []
            for idx in sorted(set(mono)):
                e = mono.count(idx)
                parts.append(child[idx] if e == 1 else f"{child[idx]}^{e}")
            out.append("·".join(parts))
        return out
    if isinstance(t, Wedge):
        child = [_wrap(x) for x in basis_labels(t.of)]
        return ["∧".join(child[i] for i in s) if s else "1" for s in _wedge_basis(t)]
    if isinstance(t, Tensor):
        ls = [_wrap(x) for x in basis_labels(t.left)]
        rs = [_wrap(x) for x in basis_labels(t.right)]
        return [f"{a}⊗{b}" for a in ls for b in rs]
    if isinstance(t, DirectSum):
        return basis_labels(t.left) + basis_labels(t.right)
    if isinstance(t, DetPower):
        return [f"det^{t.k}"]
    if isinstance(t, Adjoint):
        return [f"{kind}{i + 1}{j + 1}" if kind == "E" else f"H{i + 1}" for kind, i, j in _adjoint_basis(t.n)]
    raise TypeError(t)


@dataclass(frozen=True)
class WeightSystem:
    labels: tuple[str, ...]
    weights: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.weights)


def _weights(t: RepTree) -> list[tuple[int, ...]]:
    if isinstance(t, Standard):
        return [tuple(int(i == j) for j in range(t.n)) for i in range(t.n)]
    if isinstance(t, Dual):
        return [tuple(-x for x in w) for w in _weights(t.of)]
    if isinstance(t, Sym):
        child = _weights(t.of)
        n = leaf_rank(t)
        return [tuple(sum(child[i][c] for i in mono) for c in range(n)) for mono in _sym_basis(t)]
    if isinstance(t, Wedge):
        child = _weights(t.of)
        n = leaf_rank(t)
        return [tuple(sum(child[i][c] for i in s) for c in range(n)) for s in _wedge_basis(t)]
    if isinstance(t, Tensor):
        return [tuple(x + y for x, y in zip(a, b)) for a in _weights(t.left) for b in _weights(t.right)]
    if isinstance(t, DirectSum):
        return _weights(t.left) + _weights(t.right)
    if isinstance(t, DetPower):
        return [(t.k,) * t.n]
    if isinstance(t, Adjoint):
        out = []
        for kind, i, j in _adjoint_basis(t.n):
            w = [0] * t.n
            if kind == "E":
                w[i] += 1
                w[j] -= 1
            out.append(tuple(w))
        return out
    raise TypeError(t)


def rep_weights(t: RepTree) -> WeightSystem:
    return WeightSystem(tuple(basis_labels(t)), tuple(_weights(t)))


def homogeneity_degrees(t: RepTree) -> set[int]:
    """Coordinate sums of the weights; a singleton {a} iff T is homogeneous of degree a."""
    return {sum(w) for w in _weights(t)}


def homogeneous_degree(t: RepTree) -> int:
    degs = homogeneity_degrees(t)
    if len(degs) != 1:
        raise NotHomogeneous(f"representation has several degrees {sorted(degs)}")
    return next(iter(degs))


# -- matrix actions -----------------------------------------------------------


def _poly_mul(p: dict, q: dict) -> dict:
    out: dict = {}
    for mp, cp in p.items():
        for mq, cq in q.items():
            key = tuple(sorted(mp + mq))
            out[key] = out.get(key, 0) + cp * cq
    return {k: v for k, v in out.items() if v}


def _sym_power_matrix(a: la.Matrix, n: int) -> la.Matrix:
    m = len(a)
    basis = list(combinations_with_replacement(range(m), n))
    pos = {b: i for i, b in enumerate(basis)}
    cols = [{(r,): a[r][c] for r in range(m) if a[r][c]} for c in range(m)]
    out = la.zeros(len(basis))
    for j, mono in enumerate(basis):
        poly: dict = {(): Fraction(1)}
        for idx in mono:
            poly = _poly_mul(poly, cols[idx])
        for key, coef in poly.items():
            out[pos[key]][j] = coef
    return out


def _adjoint_action(g: la.Matrix, n: int) -> la.Matrix:
    ginv = la.inverse(g)
    basis = _adjoint_basis(n)
    out = la.zeros(len(basis))
    for col, elem in enumerate(basis):
        y = adjoint_basis_matrix(n, elem)
        coords = sl_coordinates(la.matmul(la.matmul(g, y), ginv))
        for row, c in enumerate(coords):
            out[row][col] = c
    return out


def adjoint_basis_matrix(n: int, elem: tuple[str, int, int]) -> la.Matrix:
    kind, i, j = elem
    y = la.zeros(n)
    if kind == "E":
        y[i][j] = Fraction(1)
    else:
        y[i][i] = Fraction(1)
        y[j][j] = Fraction(-1)
    return y


def sl_coordinates(x: la.Matrix) -> list[Fraction]:
    """Coordinates of a trace-zero matrix in the Adjoint basis."""
    n = len(x)
    if sum((x[i][i] for i in range(n)), Fraction(0)) != 0:
        raise ValueError("matrix is not trace-zero")
    coords = [x[i][j] for i in range(n) for j in range(n) if i != j]
    acc = Fraction(0)
    for i in range(n - 1):
        acc += x[i][i]
        coords.append(acc)
    return coords


def sl_matrix(coords) -> la.Matrix:
    """Inverse of :func:`sl_coordinates`."""
    coords = [la.to_fraction(c) for c in coords]
    n = round((len(coords) + 1) ** 0.5)
    x = la.zeros(n)
    it = iter(coords)
    for i in range(n):
        for j in range(n):
            if i != j:
                x[i][j] = next(it)
    hs = list(it)
    for i in range(n):
        x[i][i] = (hs[i] if i < n - 1 else 0) - (hs[i - 1] if i > 0 else 0)
    return x


def matrix_action(t: RepTree, g) -> la.Matrix:
    """Matrix of T(g) in the documented basis of W."""
    g = la.mat(g)
    if len(g) != leaf_rank(t):
        raise RankMismatch(f"g is {len(g)}×{len(g)} but N = {leaf_rank(t)}")
    if la.det(g) == 0:
        raise la.SingularMatrix("g is not invertible")
    return _action(t, g)


def _action(t: RepTree, g: la.Matrix) -> la.Matrix:
    if isinstance(t, Standard):
        return [row[:] for row in g]
    if isinstance(t, Dual):
        return la.transpose(la.inverse(_action(t.of, g)))
    if isinstance(t, Sym):
        return _sym_power_matrix(_action(t.of, g), t.n)
    if isinstance(t, Wedge):
        return la.compound(_action(t.of, g), t.k)
    if isinstance(t, Tensor):
        return la.kron(_action(t.left, g), _action(t.right, g))
    if isinstance(t, DirectSum):
        return la.block_diag(_action(t.left, g), _action(t.right, g))
    if isinstance(t, DetPower):
        return [[la.det(g) ** t.k]]
    if isinstance(t, Adjoint):
        return _adjoint_action(g, t.n)
    raise TypeError(t)


# -- metric transport ---------------------------------------------------------


def _sym_dual_gram(m: la.Matrix, n: int) -> la.Matrix:
    """Gram of the dual of Symⁿ as the restriction of m^{⊗n} to symmetric tensors.

    For dual-monomial basis vectors α*, β* the pairing is
    n!·perm(m[α, β]) / (α!·β!), α! the product of multiplicity factorials.
    """
    basis = list(combinations_with_replacement(range(len(m)), n))
    fact = [_multiplicity_factorial(b) for b in basis]
    nf = factorial(n)
    out = la.zeros(len(basis))
    for a, alpha in enumerate(basis):
        for b in range(a, len(basis)):
            beta = basis[b]
            val = Fraction(nf) * la.permanent(la.submatrix(m, alpha, beta)) / (fact[a] * fact[b])
            out[a][b] = out[b][a] = val
    return out


def _multiplicity_factorial(mono: tuple[int, ...]) -> int:
    out = 1
    for idx in set(mono):
        out *= factorial(mono.count(idx))
    return out


def _adjoint_embedding(n: int) -> la.Matrix:
    """Columns express the Adjoint basis in the e_i ⊗ e_j* basis of Std ⊗ Dual."""
    basis = _adjoint_basis(n)
    out = la.zeros(n * n, len(basis))
    for col, (kind, i, j) in enumerate(basis):
        if kind == "E":
            out[i * n + j][col] = Fraction(1)
        else:
            out[i * n + i][col] = Fraction(1)
            out[j * n + j][col] = Fraction(-1)
    return out


def natural_gram(t: RepTree, g: la.Matrix) -> la.Matrix:
    """The unscaled functorial Gram on W induced from the Gram g on ℤ^N."""
    if isinstance(t, Standard):
        return [row[:] for row in g]
    if isinstance(t, Dual):
        return la.inverse(natural_gram(t.of, g))
    if isinstance(t, Sym):
        child = natural_gram(t.of, g)
        return la.inverse(_sym_dual_gram(la.inverse(child), t.n))
    if isinstance(t, Wedge):
        return la.compound(natural_gram(t.of, g), t.k)
    if isinstance(t, Tensor):
        return la.kron(natural_gram(t.left, g), natural_gram(t.right, g))
    if isinstance(t, DirectSum):
        return la.block_diag(natural_gram(t.left, g), natural_gram(t.right, g))
    if isinstance(t, DetPower):
        return [[la.det(g) ** t.k]]
    if isinstance(t, Adjoint):
        b = _adjoint_embedding(t.n)
        big = la.kron(g, la.inverse(g))
        return la.matmul(la.matmul(la.transpose(b), big), b)
    raise TypeError(t)


def induced_gram(t: RepTree | CompactifiedRep, lat: HermitianLattice) -> HermitianLattice:
    """The hermitian tensor bundle Ē_T: natural Gram on W times the compactification scale."""
    crep = as_crep(t)
    if leaf_rank(crep.tree) != lat.rank:
        raise RankMismatch(f"representation has N = {leaf_rank(crep.tree)}, lattice rank {lat.rank}")
    gram = natural_gram(crep.tree, lat.matrix())
    if crep.scale != 1:
        gram = la.scale(gram, crep.scale)
    return _trusted(gram)


# -- homogeneous decomposition -----------------------------------------------


@dataclass(frozen=True)
class Component:
    degree: int
    indices: tuple[int, ...]
    lattice: HermitianLattice


def decompose_homogeneous(t: RepTree | CompactifiedRep, lat: HermitianLattice) -> list[Component]:
    """Split W by homogeneity degree and check the pieces are orthogonal.

    Distinct degrees share no isotypic factor, so any U(N)-invariant metric is
    block diagonal across them; a nonzero cross entry means a recipe bug.
    """
    crep = as_crep(t)
    gram = induced_gram(crep, lat).matrix()
    groups: dict[int, list[int]] = {}
    for i, w in enumerate(_weights(crep.tree)):
        groups.setdefault(sum(w), []).append(i)
    owner = {i: a for a, idx in groups.items() for i in idx}
    for i in range(len(gram)):
        for j in range(i + 1, len(gram)):
            if owner[i] != owner[j] and gram[i][j] != 0:
                raise OrthogonalityViolation(
                    f"Gram entry ({i}, {j}) = {gram[i][j]} couples degrees {owner[i]} and {owner[j]}"
                )
    return [
        Component(a, tuple(idx), _trusted(la.submatrix(gram, idx, idx)))
        for a, idx in sorted(groups.items())
    ]


# -- determinant twist --------------------------------------------------------


@dataclass(frozen=True)
class DetTwistReport:
    degree: int
    rank_w: int
    exponent: int  # a·rk(W)/N
    lhs: LogValue  # ½ ln det(Gram of Ē_T)
    rhs: LogValue  # (a·rk(W)/N)·½ ln det(Gram of Ē)
    ordering: Ordering
    discrepancy: LogValue
    normalization: LogValue  # discrepancy of the natural metric at the unit lattice
    expected_discrepancy: LogValue  # rk(W)·½ ln(scale) + normalization
    status: Ordering = field(default=Ordering.EQ)

    @property
    def isometric(self) -> bool:
        return self.status is Ordering.EQ


def det_twist_check(t: RepTree | CompactifiedRep, lat: HermitianLattice) -> DetTwistReport:
    """Compare det(Ē_T) with det(Ē)^{a·rk(W)/N} exactly.

    The natural metric of a tree is only defined up to the scalar fixed at the
    unit lattice, so the comparison reports the raw ordering, the exact
    discrepancy, and ``status`` = EQ iff the discrepancy is the constant
    rk(W)·½ln(scale) + normalization, i.e. iff the isomorphism is an isometry
    after that one normalization.
    """
    crep = as_crep(t)
    a = homogeneous_degree(crep.tree)
    n = leaf_rank(crep.tree)
    rk = rep_dimension(crep.tree)
    if (a * rk) % n:
        raise DivisibilityFailure(f"N = {n} does not divide a·rk(W) = {a * rk}")
    e = a * rk // n
    lhs = LogValue(la.det(induced_gram(crep, lat).matrix()))
    base = LogValue(la.det(lat.matrix()))
    rhs = base.scale_int(e)
    ordering = lv_affine_compare([(1, lhs)], [(e, base)])
    disc = LogValue(lhs.q / rhs.q)
    norm = LogValue(la.det(natural_gram(crep.tree, la.identity(n))))
    expected = LogValue(crep.scale ** rk * norm.q)
    status = lv_affine_compare([(1, disc)], [(1, expected)])
    return DetTwistReport(a, rk, e, lhs, rhs, ordering, disc, norm, expected, status)


# -- JSON ---------------------------------------------------------------------


def rep_from_json(obj) -> RepTree:
    if not isinstance(obj, dict) or len([k for k in obj if k not in ("schema", "scale")]) != 1:
        raise ValueError(f"expected a single-key tagged object, got {obj!r}")
    (tag, body), = ((k, v) for k, v in obj.items() if k not in ("schema", "scale"))
    if tag == "std":
        return Standard(int(body))
    if tag == "adjoint":
        return Adjoint(int(body))
    if tag == "dual":
        return Dual(rep_from_json(body))
    if tag == "sym":
        return Sym(int(body["n"]), rep_from_json(body["of"]))
    if tag == "wedge":
        return Wedge(int(body["k"]), rep_from_json(body["of"]))
    if tag == "tensor":
        return Tensor(rep_from_json(body[0]), rep_from_json(body[1]))
    if tag == "sum":
        return DirectSum(rep_from_json(body[0]), rep_from_json(body[1]))
    if tag == "det":
        return DetPower(int(body["n"]), int(body["k"]))
    raise ValueError(f"unknown representation tag {tag!r}")


def rep_to_json(t: RepTree):
    if isinstance(t, Standard):
        return {"std": t.n}
    if isinstance(t, Adjoint):
        return {"adjoint": t.n}
    if isinstance(t, Dual):
        return {"dual": rep_to_json(t.of)}
    if isinstance(t, Sym):
        return {"sym": {"n": t.n, "of": rep_to_json(t.of)}}
    if isinstance(t, Wedge):
        return {"wedge": {"k": t.k, "of": rep_to_json(t.of)}}
    if isinstance(t, Tensor):
        return {"tensor": [rep_to_json(t.left), rep_to_json(t.right)]}
    if isinstance(t, DirectSum):
        return {"sum": [rep_to_json(t.left), rep_to_json(t.right)]}
    if isinstance(t, DetPower):
        return {"det": {"n": t.n, "k": t.k}}
    raise TypeError(t)


def crep_from_json(obj) -> CompactifiedRep:
    return CompactifiedRep(rep_from_json(obj), Fraction(obj.get("scale", 1)))


def crep_to_json(c: CompactifiedRep) -> dict:
    out = {"schema": 1, **rep_to_json(c.tree)}
    out["scale"] = f"{c.scale.numerator}/{c.scale.denominator}"
    return out
