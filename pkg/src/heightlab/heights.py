"""Heights of points of ℙ(Ē_T), the lower bound for semistable points, and drift.

Height convention: a point is the quotient E_T ↠ M given by a primitive
integer covector u.  With the quotient metric the generator of M has norm
1/‖u‖, where ‖u‖² = u·G_T⁻¹·uᵀ is the dual norm, and primitivity makes M/u(E_T)
trivial, so h(p) = ½·ln(u·G_T⁻¹·uᵀ).

The bound for semistable points reads N·h(p) >= a·deĝ(Ē) + N·C; with a, N
integers it is decided by :func:`heightlab.loglin.lv_affine_compare`.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from . import linalg as la
from .hermlat import FIELD_DEGREE, PLACES, HermitianLattice, _trusted, arakelov_degree, lattice_new
from .loglin import LogValue, Ordering, lv_affine_compare, lv_combine, lv_to_float
from .reps import (
    Adjoint,
    CompactifiedRep,
    RankMismatch,
    RepTree,
    as_crep,
    decompose_homogeneous,
    homogeneous_degree,
    induced_gram,
    leaf_rank,
    matrix_action,
    rep_dimension,
)
from .semistab import (
    InstabilityCertificate,
    InvariantGeneratorSet,
    NotInvariant,
    OnePS,
    PointInP,
    _random_sl_element,
    adjoint_invariants,
    adjoint_jordan_translate,
    adjoint_semistable,
    check_invariance,
)


class DegenerateInput(ValueError):
    pass


class NotSemistable(ValueError):
    pass


class NotDestabilizing(ValueError):
    pass


class NoSemistableComponent(ValueError):
    pass


# -- heights ------------------------------------------------------------------


def covector_height(gram: la.Matrix, u: Sequence) -> LogValue:
    """½·ln(u·G⁻¹·uᵀ) for a covector u on a lattice with Gram G."""
    return LogValue(la.quadratic_form(u, la.inverse(gram)))


def point_height(lat: HermitianLattice, t: RepTree | CompactifiedRep, p: PointInP) -> LogValue:
    crep = as_crep(t)
    if crep.tree != p.rep:
        raise ValueError("point lives in a different representation")
    if leaf_rank(crep.tree) != lat.rank:
        raise RankMismatch(f"N = {leaf_rank(crep.tree)} but lattice rank {lat.rank}")
    if rep_dimension(crep.tree) < 2:
        raise DegenerateInput("ℙ(E_T) is a point when dim W < 2")
    gram = induced_gram(crep, lat).matrix()
    q = Fraction(1)
    for _ in PLACES:
        q *= la.quadratic_form(p.covector, la.inverse(gram))
    # h = deĝ(M̄)/[K:ℚ]; FIELD_DEGREE is 1 so no root is taken
    assert FIELD_DEGREE == 1
    return LogValue(q)


# -- certified bounds ---------------------------------------------------------


def lambda_min_lower_bound(h: la.Matrix, steps: int = 40) -> Fraction:
    """A rational ℓ with 0 < ℓ <= λ_min(h), h symmetric positive definite.

    First tries a small-denominator rational near the float eigenvalue and
    accepts it if h − ℓI is singular and PSD (then ℓ = λ_min exactly).
    Otherwise bisects on ℓ, certifying h − ℓI ≻ 0 by exact leading minors.
    """
    import numpy as np

    n = len(h)
    approx = float(min(np.linalg.eigvalsh(np.array([[float(x) for x in r] for r in h]))))
    for den in (1, 2, 3, 4, 6, 8, 12, 16, 24, 36, 48, 64, 100, 1000):
        cand = Fraction(approx).limit_denominator(den)
        if cand > 0:
            shifted = [[h[i][j] - (cand if i == j else 0) for j in range(n)] for i in range(n)]
            if la.det(shifted) == 0 and la.is_positive_semidefinite(shifted):
                return cand
    lo, hi = Fraction(0), min(h[i][i] for i in range(n))
    for _ in range(steps):
        mid = (lo + hi) / 2
        shifted = [[h[i][j] - (mid if i == j else 0) for j in range(n)] for i in range(n)]
        if la.first_nonpositive_minor(shifted) is None:
            lo = mid
        else:
            hi = mid
    if lo == 0:
        raise ArithmeticError("bisection failed to certify a positive lower bound")
    return lo


def root_upper_bound(s: Fraction, d: int, steps: int = 40) -> Fraction:
    """A rational U with U^d >= s² and U close to s^(2/d); exact if s^(2/d) is rational."""
    target = s * s
    num = _int_root(target.numerator, d)
    den = _int_root(target.denominator, d)
    if num is not None and den is not None:
        return Fraction(num, den)
    lo, hi = Fraction(0), max(Fraction(1), target)
    for _ in range(steps):
        mid = (lo + hi) / 2
        if mid**d >= target:
            hi = mid
        else:
            lo = mid
    return hi


def _int_root(x: int, d: int) -> int | None:
    r = round(x ** (1.0 / d))
    for c in (r - 1, r, r + 1):
        if c >= 0 and c**d == x:
            return c
    return None


@dataclass(frozen=True)
class ConstantReport:
    """Certified lower bound for the constant of the bound, plus a sampled estimate."""

    c_cert: LogValue
    lambda_lower: Fraction
    coefficient_sums: tuple[Fraction, ...]
    root_bounds: tuple[Fraction, ...]
    c_estimate_float: float  # −ln of a sampled lower estimate of B; >= the sharp constant
    samples: int


def _sup_norm_estimate(h: la.Matrix, gens: InvariantGeneratorSet, samples: int, seed: int) -> float:
    import numpy as np

    rng = np.random.default_rng(seed)
    hm = np.array([[float(x) for x in r] for r in h])
    chol = np.linalg.cholesky(hm)
    best = 0.0
    polys = [
        (p.degree, [(np.array(k), float(v)) for k, v in p.terms]) for p in gens.polys
    ]
    for _ in range(samples):
        z = rng.standard_normal(len(h))
        v = np.linalg.solve(chol.T, z)  # vᵀ h v = |z|²
        nrm = float(np.sqrt(v @ hm @ v))
        v = v / nrm
        for deg, terms in polys:
            val = abs(sum(c * float(np.prod(v**k)) for k, c in terms))
            best = max(best, val ** (1.0 / deg))
    return best


def constant_from_dual_gram(
    dual_gram: la.Matrix, gens: InvariantGeneratorSet, samples: int = 200, seed: int = 0
) -> ConstantReport:
    """Certified C from the metric on W^∨ and integer invariant generators.

    |P(v)| <= S·‖v‖_∞^D with S the sum of |coefficients|, and ‖v‖_∞² <= ‖v‖²/λ_min,
    so B² <= max_i S_i^{2/D_i} / λ_min and C = −ln B >= ½·ln(ℓ / max_i U_i).
    """
    if not len(gens):
        raise NotSemistable("no invariant generators: every point is unstable")
    ell = lambda_min_lower_bound(dual_gram)
    sums = tuple(p.abs_coefficient_sum() for p in gens.polys)
    roots = tuple(root_upper_bound(s, p.degree) for s, p in zip(sums, gens.polys))
    c_cert = LogValue(ell / max(roots))
    est_b = _sup_norm_estimate(dual_gram, gens, samples, seed) if samples else 0.0
    c_est = -math.log(est_b) if est_b > 0 else math.inf
    return ConstantReport(c_cert, ell, sums, roots, c_est, samples)


def rep_constant(
    t: RepTree | CompactifiedRep, gens: InvariantGeneratorSet, samples: int = 200, seed: int = 0
) -> ConstantReport:
    """Certified lower bound for C(T̄) = −Σ_σ ln B_σ.

    The compactification metric is the transported metric at the unit lattice;
    the generators live on W^∨ with the dual of that metric.
    """
    crep = as_crep(t)
    homogeneous_degree(crep.tree)
    n = leaf_rank(crep.tree)
    unit = _trusted(la.identity(n))
    dual = la.inverse(induced_gram(crep, unit).matrix())
    return constant_from_dual_gram(dual, gens, samples, seed)


# -- the bound for semistable points ------------------------------------------


@dataclass(frozen=True)
class BoundReport:
    height: LogValue
    # floor = (Σ coef·value) / denominator
    floor_terms: tuple[tuple[int, LogValue], ...]
    denominator: int
    satisfied: bool
    margin_float: float
    witness: tuple[int, Fraction] | None = None
    constant: ConstantReport | None = None

    def floor_value(self) -> float:
        return sum(c * float(lv_to_float(v, 30)) for c, v in self.floor_terms) / self.denominator

    def to_json(self, digits: int = 17) -> dict:
        return {
            "height": str(self.height),
            "height_float": float(lv_to_float(self.height, digits)),
            "floor": {
                "terms": [{"coef": c, "value": str(v), "value_float": float(lv_to_float(v, digits))} for c, v in self.floor_terms],
                "denominator": self.denominator,
                "exact": str(_floor_logvalue(self)),
                "float": self.floor_value(),
            },
            "satisfied": self.satisfied,
            "margin": {"exact": _margin_logvalue(self), "float": self.margin_float},
            "witness": None
            if self.witness is None
            else {"generator": self.witness[0], "value": _fs(self.witness[1]), "value_float": float(self.witness[1])},
        }


def _fs(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _floor_logvalue(r: BoundReport) -> str:
    """Exact floor as '(logv:q)/den'; the den-th root is not taken."""
    combined = lv_combine(r.floor_terms)
    return f"({combined})/{r.denominator}"


def _margin_logvalue(r: BoundReport) -> str:
    """Exact height − floor, written as (den·h − Σ terms)/den."""
    scaled = lv_combine([(r.denominator, r.height)] + [(-c, v) for c, v in r.floor_terms])
    return f"({scaled})/{r.denominator}"


def _decide(height: LogValue, terms: Sequence[tuple[int, LogValue]], den: int) -> tuple[bool, float]:
    order = lv_affine_compare([(den, height)], list(terms))
    margin = float(lv_to_float(height, 30)) - sum(c * float(lv_to_float(v, 30)) for c, v in terms) / den
    return order is not Ordering.LT, margin


def _require_semistable(p: PointInP, gens: InvariantGeneratorSet, check: bool, seed: int):
    if isinstance(p.rep, Adjoint):
        if not adjoint_semistable(p.adjoint_matrix()):
            raise NotSemistable("ad(x) is nilpotent: the point is unstable")
    if check:
        check_invariance(p.rep, gens, seed=seed)
    for i, poly in enumerate(gens.polys):
        val = poly(p.covector)
        if val:
            return i, val
    raise NotSemistable("every invariant generator vanishes at the point")


def theorem1_check(
    lat: HermitianLattice,
    t: RepTree | CompactifiedRep,
    p: PointInP,
    gens: InvariantGeneratorSet | None = None,
    constant: ConstantReport | None = None,
    check_invariants: bool = True,
    seed: int = 0,
) -> BoundReport:
    """Decide h(p) >= a·deĝ(Ē)/N + C exactly for a semistable p.

    For adjoint points the generators default to c_2, …, c_N.
    """
    crep = as_crep(t)
    a = homogeneous_degree(crep.tree)
    n = leaf_rank(crep.tree)
    if gens is None:
        if not isinstance(crep.tree, Adjoint):
            raise ValueError("invariant generators are required for non-adjoint representations")
        gens = adjoint_invariants(crep.tree.n)
    witness = _require_semistable(p, gens, check_invariants, seed)
    if constant is None:
        constant = rep_constant(crep, gens, samples=0)
    h = point_height(lat, crep, p)
    deg = arakelov_degree(lat)
    terms = ((a, deg), (n * FIELD_DEGREE, constant.c_cert))
    ok, margin = _decide(h, terms, n * FIELD_DEGREE)
    return BoundReport(h, terms, n * FIELD_DEGREE, ok, margin, witness, constant)


# -- arbitrary representations ------------------------------------------------


@dataclass(frozen=True)
class Theorem2Report:
    bound: BoundReport  # h(p) against A_T(Ē) + C
    case: str  # "a" (point inside one component) or "b" (projection)
    component_degree: int
    projection_height: LogValue
    projection_le_height: bool
    component_bound: BoundReport
    slopes: tuple[tuple[int, LogValue], ...]  # (a_i, deĝ) pairs entering A_T


def _component_action(rep: RepTree, idx: Sequence[int], g: la.Matrix) -> la.Matrix:
    from .reps import Dual

    full = matrix_action(Dual(rep), g)
    return la.submatrix(full, idx, idx)


def _check_component_invariance(rep: RepTree, idx, degree: int, gens: InvariantGeneratorSet, seed: int):
    n = leaf_rank(rep)
    rng = random.Random(seed)
    for _ in range(3):
        g = _random_sl_element(n, rng, 3, 2)
        g[0] = [c * 2 for c in g[0]]
        act = _component_action(rep, idx, g)
        u = [Fraction(rng.randint(-3, 3)) for _ in idx]
        gu = la.matvec(act, u)
        for k, poly in enumerate(gens.polys):
            D = poly.degree
            if poly.nvars != len(idx):
                raise NotInvariant(f"component generator {k} has {poly.nvars} variables, block has {len(idx)}")
            if (degree * D) % n:
                raise NotInvariant(f"a·D/N = {degree}·{D}/{n} is not an integer")
            if poly(gu) != la.det(g) ** (-(degree * D) // n) * poly(u):
                raise NotInvariant(f"component generator {k} is not invariant")


def theorem2_floor(
    lat: HermitianLattice,
    t: RepTree | CompactifiedRep,
    p: PointInP,
    gens: Mapping[int, InvariantGeneratorSet],
    check_invariants: bool = True,
    seed: int = 0,
) -> Theorem2Report:
    """Bound h(p) >= A_T(Ē) + C for an arbitrary compactified representation.

    ``gens`` maps a homogeneity degree to generators in that block's covector
    coordinates.  C is the minimum of the certified component constants.
    """
    crep = as_crep(t)
    n = leaf_rank(crep.tree)
    deg = arakelov_degree(lat)
    comps = decompose_homogeneous(crep, lat)
    unit_comps = {c.degree: c for c in decompose_homogeneous(crep, _trusted(la.identity(n)))}
    constants = {}
    for c in comps:
        if c.degree in gens:
            dual = la.inverse(unit_comps[c.degree].lattice.matrix())
            constants[c.degree] = constant_from_dual_gram(dual, gens[c.degree], samples=0)
    if not constants:
        raise NoSemistableComponent("no component has invariant generators")
    c_min = min((c.c_cert for c in constants.values()), key=lambda v: v.q)

    support = {c.degree for c in comps if any(p.covector[i] for i in c.indices)}
    case = "a" if len(support) == 1 else "b"
    chosen = None
    for c in comps:
        if c.degree not in support or c.degree not in gens:
            continue
        u = [p.covector[i] for i in c.indices]
        u = la.primitive(u)
        if check_invariants:
            _check_component_invariance(crep.tree, c.indices, c.degree, gens[c.degree], seed)
        hit = next(((k, poly(u)) for k, poly in enumerate(gens[c.degree].polys) if poly(u)), None)
        if hit is not None:
            chosen = (c, u, hit)
            break
    if chosen is None:
        raise NoSemistableComponent("no component projection of the point is semistable")
    comp, u, hit = chosen

    h = point_height(lat, crep, p)
    h_proj = covector_height(comp.lattice.matrix(), u)
    proj_ok = lv_affine_compare([(1, h_proj)], [(1, h)]) is not Ordering.GT

    cterms = ((comp.degree, deg), (n * FIELD_DEGREE, constants[comp.degree].c_cert))
    ok_c, margin_c = _decide(h_proj, cterms, n * FIELD_DEGREE)
    comp_report = BoundReport(h_proj, cterms, n * FIELD_DEGREE, ok_c, margin_c, hit, constants[comp.degree])

    # A_T(Ē) = min_i a_i·deĝ/N over all components
    slopes = tuple((c.degree, deg) for c in comps)
    a_min = min((c.degree for c in comps), key=lambda a: deg.scale_int(a).q)
    terms = ((a_min, deg), (n * FIELD_DEGREE, c_min))
    ok, margin = _decide(h, terms, n * FIELD_DEGREE)
    bound = BoundReport(h, terms, n * FIELD_DEGREE, ok, margin, hit, constants[comp.degree])
    return Theorem2Report(bound, case, comp.degree, h_proj, proj_ok, comp_report, slopes)


# -- drift for unstable points ------------------------------------------------


@dataclass(frozen=True)
class DriftReport:
    exponents: tuple[int, ...]
    heights: tuple[LogValue, ...]
    degrees: tuple[LogValue, ...]
    steps: tuple[LogValue, ...]
    asymptotic_step: LogValue  # ½·ln(t^{−2m}), m the least active pairing
    decreasing_from: int | None
    constant_step_from: int | None
    destabilizing: bool

    @property
    def degree_constant(self) -> bool:
        return len(set(self.degrees)) == 1

    def to_csv_rows(self, digits: int = 17) -> list[list[str]]:
        rows = [["n", "height_float", "height_exact", "degree_exact"]]
        for n, h, d in zip(self.exponents, self.heights, self.degrees):
            rows.append([str(n), str(lv_to_float(h, digits)), str(h), str(d)])
        return rows


def drift_lattice(lat0: HermitianLattice, lam: OnePS, base: int, n: int, g=None) -> HermitianLattice:
    """Ē_n: Gram Aᵀ·G₀·A with A = diag(t^{−n·r})·g.

    This is the metric with orthonormal basis λ(tⁿ)·g⁻¹(eᵢ) relative to G₀;
    det A = det g, so deĝ is unchanged when g ∈ SL_N.
    """
    d = la.diag([Fraction(base) ** (-n * r) for r in lam.r])
    a = d if g is None else la.matmul(d, la.mat(g))
    return lattice_new(la.matmul(la.matmul(la.transpose(a), lat0.matrix()), a))


def drift_sequence(
    x: PointInP,
    lam: OnePS,
    base: int,
    steps: int,
    lat0: HermitianLattice,
    t: RepTree | CompactifiedRep | None = None,
    g=None,
    check: bool = True,
) -> DriftReport:
    """Heights of a fixed point x along metrics flowing in the direction λ.

    With ``g`` the translate of an instability certificate, the flow runs in
    the frame where x is torus-unstable for λ.  Raises NotDestabilizing if λ
    does not pair positively with every active weight of g·x (unless
    ``check`` is false, in which case the report just says so).
    """
    if base < 2:
        raise ValueError("base must be >= 2")
    crep = as_crep(t if t is not None else x.rep)
    n = leaf_rank(crep.tree)
    gm = la.identity(n) if g is None else la.mat(g)
    from .semistab import translate_covector

    moved = PointInP(x.rep, tuple(translate_covector(x.rep, gm, x.covector)))
    pairings = [sum(a * b for a, b in zip(w, lam.r)) for w in moved.active_weights()]
    destab = all(p > 0 for p in pairings)
    if check and not destab:
        raise NotDestabilizing(f"λ = {lam.r} pairs non-positively with an active weight: {pairings}")
    exps = tuple(range(steps + 1))
    heights, degrees = [], []
    for k in exps:
        lat = drift_lattice(lat0, lam, base, k, gm)
        heights.append(point_height(lat, crep, x))
        degrees.append(arakelov_degree(lat))
    diffs = tuple(heights[i + 1] - heights[i] for i in range(steps))
    m = min(pairings)
    asym = LogValue(Fraction(base) ** (-2 * m))
    dec_from = None
    for i in range(steps, -1, -1):
        if i < steps and not heights[i + 1] < heights[i]:
            break
        dec_from = i
    if dec_from == steps:
        dec_from = None
    const_from = None
    for i in range(steps - 1, -1, -1):
        if diffs[i] != asym:
            break
        const_from = i
    return DriftReport(exps, tuple(heights), tuple(degrees), diffs, asym, dec_from, const_from, destab)


def adjoint_drift_certificate(x: PointInP) -> InstabilityCertificate:
    """Certificate for a nilpotent adjoint point adapted to exact drift.

    g ∈ SL_N(ℚ) puts the matrix on the superdiagonal, and
    λ = (N−1, N−3, …, 1−N) pairs to 2 with every simple root, so every active
    weight contributes the same rate and the height step is constant.
    """
    from .semistab import translate_covector, verify_certificate

    if not isinstance(x.rep, Adjoint):
        raise TypeError("adjoint points only")
    n = x.rep.n
    g = adjoint_jordan_translate(x.adjoint_matrix())
    if g is None:
        raise NotDestabilizing("ad(x) is not nilpotent: the point is semistable")
    lam = OnePS(tuple(n - 1 - 2 * i for i in range(n)))
    cert = InstabilityCertificate(tuple(tuple(r) for r in g), lam, tuple(translate_covector(x.rep, g, x.covector)))
    if not verify_certificate(x, cert):
        raise AssertionError("Jordan translate failed to destabilize")
    return cert
