from fractions import Fraction

import pytest
import sympy

from heightlab import linalg as la
from heightlab.hermlat import arakelov_degree, lattice_new
from heightlab.heights import (
    DegenerateInput,
    NoSemistableComponent,
    NotDestabilizing,
    NotSemistable,
    adjoint_drift_certificate,
    drift_lattice,
    drift_sequence,
    lambda_min_lower_bound,
    point_height,
    rep_constant,
    root_upper_bound,
    theorem1_check,
    theorem2_floor,
)
from heightlab.instances import random_lattice, random_nilpotent, random_semistable_trace_zero
from heightlab.loglin import LogValue, ZERO
from heightlab.polys import Poly
from heightlab.reps import Adjoint, DetPower, DirectSum, Standard, Sym, induced_gram
from heightlab.semistab import InvariantGeneratorSet, OnePS, PointInP, adjoint_invariants

E12 = [[0, 1], [0, 0]]
H = [[1, 0], [0, -1]]

# Frozen by hand: along diag(2^{-n}, 2^{n})·L₀ the covector E12 has Gram weight scaled by 2^{-4}
# per step, so each step lowers the height by ½ln 16 = 2 ln 2.
E12_STEP = LogValue(Fraction(1, 16))
ADJ2_CONSTANT = LogValue(Fraction(1, 10))


def test_height_of_H_at_unit_lattice():
    assert point_height(lattice_new(la.identity(2)), Adjoint(2), PointInP.from_adjoint_matrix(H)) == LogValue(Fraction(1, 2))


def test_height_matches_quadratic_form_oracle(rng):
    t = Sym(2, Standard(3))
    for _ in range(5):
        lat = random_lattice(rng, 3)
        u = tuple(rng.randint(-4, 4) for _ in range(6))
        if not any(u):
            continue
        p = PointInP(t, u)
        g = sympy.Matrix(induced_gram(t, lat).matrix())
        v = sympy.Matrix([p.covector])
        assert point_height(lat, t, p).q == (v * g.inv() * v.T)[0, 0]


def test_height_rejects_one_dimensional_w():
    with pytest.raises(DegenerateInput):
        point_height(lattice_new(la.identity(2)), DetPower(2, 1), PointInP(DetPower(2, 1), (1,)))


def test_lambda_min_bound_against_sympy(rng):
    for n in (2, 3, 4):
        h = random_lattice(rng, n).matrix()
        ell = lambda_min_lower_bound(h)
        lam = min(sympy.Matrix(h).eigenvals(multiple=True), key=lambda e: float(sympy.re(sympy.N(e, 50))))
        assert 0 < ell <= sympy.re(sympy.N(lam, 60)) + sympy.Rational(1, 10**40)
        assert ell > sympy.re(sympy.N(lam, 60)) / 2


def test_lambda_min_exact_when_rational():
    assert lambda_min_lower_bound(la.diag([1, 1, Fraction(1, 2)])) == Fraction(1, 2)


@pytest.mark.parametrize("s,d", [(Fraction(5), 2), (Fraction(7), 3), (Fraction(4), 4), (Fraction(10, 3), 5)])
def test_root_upper_bound(s, d):
    u = root_upper_bound(s, d)
    assert u**d >= s * s
    assert float(u) == pytest.approx(float(s) ** (2 / d), rel=1e-9)


def test_adjoint2_constant_regression():
    rep = rep_constant(Adjoint(2), adjoint_invariants(2), samples=400)
    assert rep.c_cert == ADJ2_CONSTANT
    assert rep.coefficient_sums == (5,)
    # the certified constant lies below the sampled estimate of the sharp one
    assert float(rep.c_cert) <= rep.c_estimate_float


def test_theorem1_on_random_instances(rng):
    for n in (2, 3):
        gens = adjoint_invariants(n)
        const = rep_constant(Adjoint(n), gens, samples=0)
        for _ in range(10):
            r = theorem1_check(
                random_lattice(rng, n), Adjoint(n), PointInP.from_adjoint_matrix(random_semistable_trace_zero(rng, n)), gens, const
            )
            assert r.satisfied and r.margin_float >= 0


def test_theorem1_rejects_unstable_points():
    with pytest.raises(NotSemistable):
        theorem1_check(lattice_new(la.identity(2)), Adjoint(2), PointInP.from_adjoint_matrix(E12))


def test_theorem1_for_binary_quadrics(rng):
    # Sym²: the covector (a, b, c) is the form a·x² + 2b·xy + c·y², invariant b² − ac
    x = [Poly.var(3, i) for i in range(3)]
    disc = InvariantGeneratorSet((x[1] * x[1] - x[0] * x[2],))
    t = Sym(2, Standard(2))
    const = rep_constant(t, disc, samples=0)
    for _ in range(10):
        lat = random_lattice(rng, 2)
        u = (rng.randint(-5, 5), rng.randint(-5, 5), rng.randint(-5, 5))
        if u[1] ** 2 == u[0] * u[2]:
            continue
        assert theorem1_check(lat, t, PointInP(t, u), disc, const).satisfied


def test_theorem2_both_cases(rng):
    t = DirectSum(Standard(2), Adjoint(2))
    gens = {0: adjoint_invariants(2)}
    lat = random_lattice(rng, 2)
    inside = theorem2_floor(lat, t, PointInP(t, (0, 0, 0, 0, 1)), gens)
    assert inside.case == "a" and inside.bound.satisfied and inside.component_bound.satisfied
    mixed = theorem2_floor(lat, t, PointInP(t, (3, -1, 0, 0, 1)), gens)
    assert mixed.case == "b" and mixed.projection_le_height
    assert mixed.bound.satisfied and mixed.component_bound.satisfied
    with pytest.raises(NoSemistableComponent):
        theorem2_floor(lat, t, PointInP(t, (1, 0, 0, 1, 0)), gens)


def test_drift_e12_regression():
    p = PointInP.from_adjoint_matrix(E12)
    r = drift_sequence(p, OnePS((1, -1)), 2, 15, lattice_new(la.identity(2)))
    assert r.degree_constant
    assert all(step == E12_STEP for step in r.steps)
    assert r.asymptotic_step == E12_STEP
    assert r.decreasing_from == 0 and r.constant_step_from == 0
    assert r.heights[15] == r.heights[0] + E12_STEP.scale_int(15)


def test_drift_wrong_direction():
    with pytest.raises(NotDestabilizing):
        drift_sequence(PointInP.from_adjoint_matrix(E12), OnePS((-1, 1)), 2, 3, lattice_new(la.identity(2)))


def test_drift_lattice_keeps_degree(rng):
    lat = random_lattice(rng, 3)
    for n in range(4):
        assert arakelov_degree(drift_lattice(lat, OnePS((2, 0, -2)), 3, n)) == arakelov_degree(lat)


def test_random_nilpotent_drift(rng):
    for n in (2, 3):
        x = random_nilpotent(rng, n)
        p = PointInP.from_adjoint_matrix(x)
        cert = adjoint_drift_certificate(p)
        r = drift_sequence(p, cert.lam, 2, 8, random_lattice(rng, n), g=cert.matrix())
        assert r.degree_constant and r.constant_step_from is not None
        assert r.asymptotic_step == E12_STEP
        assert r.heights[-1] < r.heights[0]


def test_semistable_point_has_no_drift_certificate():
    with pytest.raises(NotDestabilizing):
        adjoint_drift_certificate(PointInP.from_adjoint_matrix(H))


def test_zero_is_zero():
    assert arakelov_degree(lattice_new(la.identity(4))) == ZERO
