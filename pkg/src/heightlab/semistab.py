"""SL_N-semistability of points of ℙ(E_T).

A point is a rank-one quotient E_T ↠ M, stored as a primitive integer
covector u on W.  The group acts on u through the dual representation, so the
torus weights that matter are the negatives of the weights of W.  Conventions:

* the *active* weights of u are the dual weights −w_a with u_a ≠ 0;
* u is torus-semistable iff 0 lies in the convex hull of its active weights
  modulo the diagonal (the SL_N torus only sees coordinate differences);
* a destabilizing one-parameter subgroup is an integer vector r with Σr = 0
  and ⟨w, r⟩ > 0 for every active weight w.  Flowing the metric along r drives
  the height of u to −∞ (see :func:`heightlab.heights.drift_sequence`).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import linalg as la
from .lp import feasible_point
from .polys import Poly
from .reps import (
    Adjoint,
    Dual,
    RankMismatch,
    RepTree,
    _weights,
    homogeneous_degree,
    leaf_rank,
    matrix_action,
    rep_dimension,
    sl_coordinates,
)


class NonzeroTrace(ValueError):
    pass


class NotInvariant(ValueError):
    pass


# -- data ---------------------------------------------------------------------


@dataclass(frozen=True)
class PointInP:
    rep: RepTree
    covector: tuple[int, ...]

    def __post_init__(self):
        if len(self.covector) != rep_dimension(self.rep):
            raise ValueError(f"covector has length {len(self.covector)}, dim W = {rep_dimension(self.rep)}")
        prim = tuple(la.primitive(self.covector))
        object.__setattr__(self, "covector", prim)

    @classmethod
    def from_adjoint_matrix(cls, x) -> "PointInP":
        """The point of ℙ(sl_N) through the trace-zero matrix x.

        x is turned into the covector Y ↦ tr(x·Y); on the E_ij/H_i basis this
        reads u(E_ij) = x_ji and u(H_i) = x_ii − x_{i+1,i+1}.
        """
        x = la.mat(x)
        n = len(x)
        if sum((x[i][i] for i in range(n)), Fraction(0)) != 0:
            raise NonzeroTrace("adjoint points must be trace-zero")
        if not any(v for row in x for v in row):
            raise ValueError("the zero matrix defines no point")
        u = [x[j][i] for i in range(n) for j in range(n) if i != j]
        u += [x[i][i] - x[i + 1][i + 1] for i in range(n - 1)]
        return cls(Adjoint(n), tuple(la.primitive(u)))

    def adjoint_matrix(self) -> la.Matrix:
        """Trace-zero matrix x with u = tr(x·-) (up to the stored scaling)."""
        if not isinstance(self.rep, Adjoint):
            raise TypeError("only adjoint points carry a matrix")
        return covector_to_sl(self.rep.n, self.covector)

    def active_indices(self) -> list[int]:
        return [i for i, x in enumerate(self.covector) if x]

    def active_weights(self) -> list[tuple[int, ...]]:
        ws = _weights(self.rep)
        return [tuple(-c for c in ws[i]) for i in self.active_indices()]


def covector_to_sl(n: int, u: Sequence) -> la.Matrix:
    u = [la.to_fraction(c) for c in u]
    x = la.zeros(n)
    k = 0
    for i in range(n):
        for j in range(n):
            if i != j:
                x[j][i] = u[k]
                k += 1
    hs = u[k:]
    top = sum((Fraction(n - 1 - i) * hs[i] for i in range(n - 1)), Fraction(0)) / n
    acc = Fraction(0)
    for i in range(n):
        x[i][i] = top - acc
        if i < n - 1:
            acc += hs[i]
    return x


@dataclass(frozen=True)
class OnePS:
    r: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "r", tuple(int(x) for x in self.r))
        if sum(self.r) != 0:
            raise ValueError(f"one-parameter subgroup weights must sum to zero, got {self.r}")


@dataclass(frozen=True)
class InvariantGeneratorSet:
    polys: tuple[Poly, ...]

    def __post_init__(self):
        for p in self.polys:
            if not p.is_homogeneous():
                raise ValueError("invariant generators must be homogeneous")
            if p.degree <= 0:
                raise ValueError("invariant generators need positive degree")

    @property
    def degrees(self) -> list[int]:
        return [p.degree for p in self.polys]

    def __len__(self) -> int:
        return len(self.polys)

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "nvars": self.polys[0].nvars if self.polys else 0,
            "generators": [{"degree": p.degree, "terms": p.to_json()} for p in self.polys],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "InvariantGeneratorSet":
        nvars = int(obj["nvars"])
        polys = []
        for g in obj["generators"]:
            p = Poly.from_json(nvars, g["terms"])
            if "degree" in g and p.degree != int(g["degree"]):
                raise ValueError(f"generator declares degree {g['degree']} but has degree {p.degree}")
            polys.append(p)
        return cls(tuple(polys))


# -- Hilbert–Mumford weight and torus test ------------------------------------


def _pair(w: Sequence[int], r: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(w, r))


def hm_weight(p: PointInP, lam: OnePS) -> int:
    """μ(p, λ) = −min ⟨w, r⟩ over the active dual weights w of p."""
    if len(lam.r) != leaf_rank(p.rep):
        raise RankMismatch(f"λ has {len(lam.r)} entries, N = {leaf_rank(p.rep)}")
    return -min(_pair(w, lam.r) for w in p.active_weights())


@dataclass(frozen=True)
class TorusResult:
    semistable: bool
    # convex combination of active weights hitting the diagonal (semistable case)
    combination: dict[tuple[int, ...], Fraction] | None = None
    # destabilizing direction (unstable case)
    lam: OnePS | None = None

    def __bool__(self) -> bool:
        return self.semistable


def hull_contains_zero_mod_diagonal(weights: Sequence[Sequence[int]]) -> dict | None:
    """Convex coefficients c >= 0, Σc = 1, with Σ c·w constant across coordinates."""
    ws = sorted(set(tuple(w) for w in weights))
    if not ws:
        return None
    n = len(ws[0])
    rows = [[w[c] - w[c + 1] for w in ws] for c in range(n - 1)]
    rows.append([1] * len(ws))
    x = feasible_point(rows, [0] * (n - 1) + [1])
    if x is None:
        return None
    return {w: c for w, c in zip(ws, x) if c}


def separating_direction(weights: Sequence[Sequence[int]]) -> OnePS | None:
    """Integer r, Σr = 0, with ⟨w, r⟩ >= 1 for all given weights, if one exists.

    Variables: r = p − q with p, q >= 0 and one slack per weight.
    """
    ws = sorted(set(tuple(w) for w in weights))
    n = len(ws[0])
    k = len(ws)
    rows = []
    for a, w in enumerate(ws):
        rows.append(list(w) + [-x for x in w] + [-int(a == b) for b in range(k)])
    rows.append([1] * n + [-1] * n + [0] * k)
    x = feasible_point(rows, [1] * k + [0])
    if x is None:
        return None
    r = [x[i] - x[n + i] for i in range(n)]
    return OnePS(tuple(la.primitive(r)))


def torus_semistable(p: PointInP) -> TorusResult:
    """Exact test of 0 ∈ conv(active weights) for the SL_N diagonal torus."""
    weights = p.active_weights()
    comb = hull_contains_zero_mod_diagonal(weights)
    if comb is not None:
        return TorusResult(True, combination=comb)
    lam = separating_direction(weights)
    if lam is None:
        raise AssertionError("Farkas alternative failed: neither a hull certificate nor a separator")
    return TorusResult(False, lam=lam)


# -- instability certificates -------------------------------------------------


@dataclass(frozen=True)
class InstabilityCertificate:
    g: tuple[tuple[Fraction, ...], ...]
    lam: OnePS
    translated: tuple[int, ...]

    def matrix(self) -> la.Matrix:
        return [list(r) for r in self.g]


def translate_covector(rep: RepTree, g, u: Sequence) -> list[int]:
    """Covector of g·p: the dual action T(g)^{-T} applied to u, made primitive."""
    act = matrix_action(Dual(rep), g)
    return la.primitive(la.matvec(act, u))


def verify_certificate(p: PointInP, cert: InstabilityCertificate) -> bool:
    g = cert.matrix()
    if la.det(g) != 1:
        return False
    moved = PointInP(p.rep, tuple(translate_covector(p.rep, g, p.covector)))
    if moved.covector != cert.translated:
        return False
    return all(_pair(w, cert.lam.r) > 0 for w in moved.active_weights())


def _certify(p: PointInP, g: la.Matrix) -> InstabilityCertificate | None:
    moved = PointInP(p.rep, tuple(translate_covector(p.rep, g, p.covector)))
    res = torus_semistable(moved)
    if res.semistable:
        return None
    return InstabilityCertificate(tuple(tuple(r) for r in g), res.lam, moved.covector)


def _random_sl_element(n: int, rng: random.Random, length: int, bound: int) -> la.Matrix:
    g = la.identity(n)
    for _ in range(length):
        if rng.random() < 0.25:
            perm = list(range(n))
            rng.shuffle(perm)
            m = la.zeros(n)
            for i, j in enumerate(perm):
                m[i][j] = Fraction(1)
            if la.det(m) < 0:
                m[0] = [-x for x in m[0]]
        else:
            i, j = rng.sample(range(n), 2)
            m = la.identity(n)
            m[i][j] = Fraction(rng.choice([c for c in range(-bound, bound + 1) if c]))
        g = la.matmul(m, g)
    return g


def instability_search(
    p: PointInP, budget: int = 200, seed: int = 0, max_word: int = 4, entry_bound: int = 2
) -> InstabilityCertificate | None:
    """Look for g ∈ SL_N(ℤ) such that g·p is torus-unstable.

    Tries the identity, then (for adjoint points) the unimodular translate that
    makes the matrix strictly upper triangular, then ``budget`` random words in
    transvections and signed permutations.  Every certificate returned is
    re-verified; ``None`` means inconclusive, not semistable.
    """
    n = leaf_rank(p.rep)
    candidates = [la.identity(n)]
    if isinstance(p.rep, Adjoint):
        tri = adjoint_triangularizer(p.adjoint_matrix())
        if tri is not None:
            candidates.append(tri)
    for g in candidates:
        cert = _certify(p, g)
        if cert is not None and verify_certificate(p, cert):
            return cert
    rng = random.Random(seed)
    for _ in range(budget):
        g = _random_sl_element(n, rng, rng.randint(1, max_word), entry_bound)
        cert = _certify(p, g)
        if cert is not None and verify_certificate(p, cert):
            return cert
    return None


# -- adjoint representation ---------------------------------------------------


def _nullspace(a: la.Matrix) -> list[list[Fraction]]:
    m = [row[:] for row in a]
    rows, cols = la.shape(m)
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        m[r] = [x / p for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -m[i][f]
        basis.append(v)
    return basis


def _unimodular_completion(v: Sequence[int]) -> la.Matrix:
    """An integer matrix of determinant ±1 whose first column is the primitive v."""
    n = len(v)
    w = [int(x) for x in v]
    ops = la.identity(n)  # ops · v = w, maintained as row operations
    while sum(1 for x in w if x) > 1 or w[0] == 0:
        nz = [i for i in range(n) if w[i]]
        i = min(nz, key=lambda k: abs(w[k]))
        for j in nz:
            if j != i:
                q = w[j] // w[i]
                w[j] -= q * w[i]
                ops[j] = [a - q * b for a, b in zip(ops[j], ops[i])]
        if sum(1 for x in w if x) == 1 and w[0] == 0:
            k = next(i for i in range(n) if w[i])
            w[0], w[k] = w[k], w[0]
            ops[0], ops[k] = ops[k], ops[0]
    if w[0] < 0:
        w[0] = -w[0]
        ops[0] = [-a for a in ops[0]]
    assert w[0] == 1, "vector was not primitive"
    return la.inverse(ops)


def adjoint_triangularizer(x: la.Matrix) -> la.Matrix | None:
    """g ∈ SL_N(ℤ) with g·x·g⁻¹ strictly upper triangular, if x is nilpotent."""
    n = len(x)
    if not is_nilpotent(x):
        return None
    p_total = la.identity(n)
    cur = [row[:] for row in x]
    for k in range(n - 1):
        sub = [row[k:] for row in cur[k:]]
        kern = _nullspace(sub)
        v = la.primitive(kern[0])
        comp = _unimodular_completion(v)
        step = la.identity(n)
        for i in range(n - k):
            for j in range(n - k):
                step[k + i][k + j] = comp[i][j]
        cur = la.matmul(la.matmul(la.inverse(step), cur), step)
        p_total = la.matmul(p_total, step)
    if la.det(p_total) < 0:
        for row in p_total:
            row[-1] = -row[-1]
    return la.inverse(p_total)


def adjoint_jordan_translate(x: la.Matrix) -> la.Matrix | None:
    """g ∈ SL_N(ℚ) with g·x·g⁻¹ supported on the superdiagonal, if x is nilpotent.

    Columns of g⁻¹ are Jordan chains X^{m−1}v, …, Xv, v; the first column is
    rescaled to make the determinant one, which keeps the support.
    """
    n = len(x)
    if not is_nilpotent(x):
        return None
    powers = [la.identity(n)]
    while any(v for row in powers[-1] for v in row):
        powers.append(la.matmul(x, powers[-1]))
    depth = len(powers) - 1
    kernels = [_nullspace(pw) if any(v for row in pw for v in row) else la.identity(n) for pw in powers]
    kernels[0] = []
    chains: list[tuple[list[Fraction], int]] = []
    for k in range(depth, 0, -1):
        span = [v[:] for v in kernels[k - 1]]
        for top, m in chains:
            if m > k:
                span.append(la.matvec(powers[m - k], top))
        for c in kernels[k]:
            if _independent(span + [c]):
                span.append(c)
                chains.append((c, k))
    cols = []
    for top, m in chains:
        cols.extend(la.matvec(powers[m - 1 - i], top) for i in range(m))
    p = la.transpose(cols)
    d = la.det(p)
    for row in p:
        row[0] /= d
    return la.inverse(p)


def _independent(vectors: list[list[Fraction]]) -> bool:
    if not vectors:
        return True
    return len(_nullspace(la.transpose(vectors))) == 0


def is_nilpotent(x: la.Matrix) -> bool:
    cp = la.charpoly(x)
    return all(c == 0 for c in cp[1:])


def ad_matrix(x: la.Matrix) -> la.Matrix:
    """Matrix of ad(x) = [x, -] on sl_N in the Adjoint basis."""
    from .reps import _adjoint_basis, adjoint_basis_matrix

    n = len(x)
    basis = _adjoint_basis(n)
    cols = []
    for elem in basis:
        y = adjoint_basis_matrix(n, elem)
        br = [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(la.matmul(x, y), la.matmul(y, x))]
        cols.append(sl_coordinates(br))
    return la.transpose(cols)


def adjoint_semistable(x, cross_check: bool = False) -> bool:
    """x ∈ sl_N is semistable iff its characteristic polynomial is not t^N."""
    x = la.mat(x)
    n = len(x)
    if sum((x[i][i] for i in range(n)), Fraction(0)) != 0:
        raise NonzeroTrace("matrix must be trace-zero")
    result = not is_nilpotent(x)
    if cross_check:
        ad_nil = is_nilpotent(ad_matrix(x))
        if ad_nil == result:
            raise AssertionError("char-poly and ad-nilpotency tests disagree")
    return result


def char_coefficients(x: la.Matrix) -> list[Fraction]:
    """[c_2, ..., c_N] of det(t·I − x) = t^N + c_1 t^{N−1} + ... + c_N."""
    return la.charpoly(la.mat(x))[2:]


def adjoint_invariants(n: int) -> InvariantGeneratorSet:
    """c_2, …, c_N as integer polynomials in the covector coordinates of sl_N.

    Each c_k(x(u)) is scaled by a positive rational to primitive integer
    coefficients; scaling does not change where it vanishes.
    """
    if n < 2:
        raise ValueError("need N >= 2")
    dim = n * n - 1
    coords = [Poly.var(dim, i) for i in range(dim)]
    # covector_to_sl, with polynomial entries
    x = [[Poly.const(dim, 0) for _ in range(n)] for _ in range(n)]
    k = 0
    for i in range(n):
        for j in range(n):
            if i != j:
                x[j][i] = coords[k]
                k += 1
    hs = coords[k:]
    top = Poly.const(dim, 0)
    for i in range(n - 1):
        top = top + hs[i] * Fraction(n - 1 - i, n)
    acc = Poly.const(dim, 0)
    for i in range(n):
        x[i][i] = top - acc
        if i < n - 1:
            acc = acc + hs[i]
    cp = la.charpoly(x)
    return InvariantGeneratorSet(tuple(c.primitive_integer() for c in cp[2:]))


def check_invariance(
    rep: RepTree, gens: InvariantGeneratorSet, samples: int = 3, seed: int = 0
) -> None:
    """Check P(T*(g)u) = det(g)^{−aD/N}·P(u) on random g and u; raise NotInvariant."""
    n = leaf_rank(rep)
    dim = rep_dimension(rep)
    degs = {sum(w) for w in _weights(rep)}
    rng = random.Random(seed)
    for p in gens.polys:
        if p.nvars != dim:
            raise NotInvariant(f"generator has {p.nvars} variables, dim W = {dim}")
        if not p.has_integer_coefficients():
            raise NotInvariant("generators must have integer coefficients")
    a = homogeneous_degree(rep) if len(degs) == 1 else None
    for _ in range(samples):
        g = _random_sl_element(n, rng, 3, 2)
        if a is not None:
            g[0] = [c * 2 for c in g[0]]  # det 2 exercises the determinant character
        act = matrix_action(Dual(rep), g)
        u = [Fraction(rng.randint(-3, 3)) for _ in range(dim)]
        gu = la.matvec(act, u)
        dg = la.det(g)
        for idx, p in enumerate(gens.polys):
            if a is None:
                factor = Fraction(1)
            else:
                D = p.degree
                if (a * D) % n:
                    raise NotInvariant(f"generator {idx}: a·D/N = {a}·{D}/{n} is not an integer")
                factor = dg ** (-(a * D) // n)
            if p(gu) != factor * p(u):
                raise NotInvariant(f"generator {idx} fails P(T*(g)u) = det(g)^(-aD/N)·P(u)")


def invariant_certificate(
    p: PointInP, gens: InvariantGeneratorSet, check: bool = True, seed: int = 0
) -> tuple[int, Fraction] | None:
    """First generator not vanishing at p, as (index, value); None if all vanish."""
    if check:
        check_invariance(p.rep, gens, seed=seed)
    for i, poly in enumerate(gens.polys):
        val = poly(p.covector)
        if val:
            return i, val
    return None
