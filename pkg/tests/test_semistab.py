from fractions import Fraction

import pytest
import sympy

from heightlab import linalg as la
from heightlab.instances import random_nilpotent, random_semistable_trace_zero, random_trace_zero
from heightlab.lp import feasible_point
from heightlab.polys import Poly
from heightlab.reps import Adjoint, Standard, Sym, Tensor, Dual, Wedge, rep_dimension
from heightlab.semistab import (
    InvariantGeneratorSet,
    NonzeroTrace,
    NotInvariant,
    OnePS,
    PointInP,
    adjoint_invariants,
    adjoint_semistable,
    adjoint_triangularizer,
    check_invariance,
    covector_to_sl,
    hm_weight,
    instability_search,
    invariant_certificate,
    is_nilpotent,
    torus_semistable,
    translate_covector,
    verify_certificate,
)

from oracles import hull_oracle


def test_lp_feasible_and_infeasible():
    x = feasible_point([[1, 1, 0], [0, 1, 1]], [2, 3])
    assert x is not None and all(v >= 0 for v in x)
    assert x[0] + x[1] == 2 and x[1] + x[2] == 3
    assert feasible_point([[1, 1]], [-1]) is None
    assert feasible_point([[1, -1], [1, -1]], [1, 2]) is None


def test_lp_degenerate_cycling_example():
    # Beale's example constraints; Bland's rule must not cycle
    a = [
        [Fraction(1, 4), -8, -1, 9, 1, 0, 0],
        [Fraction(1, 2), -12, Fraction(-1, 2), 3, 0, 1, 0],
        [0, 0, 1, 0, 0, 0, 1],
    ]
    x = feasible_point(a, [0, 0, 1])
    assert x is not None
    assert la.matvec(la.mat(a), x) == [0, 0, 1]


def test_adjoint_points_from_matrices():
    h = PointInP.from_adjoint_matrix([[1, 0], [0, -1]])
    assert h.covector == (0, 0, 1)
    e = PointInP.from_adjoint_matrix([[0, 1], [0, 0]])
    assert e.covector == (0, 1, 0)
    with pytest.raises(NonzeroTrace):
        PointInP.from_adjoint_matrix([[1, 0], [0, 0]])


def test_covector_matrix_roundtrip(rng):
    for n in (2, 3, 4):
        x = random_trace_zero(rng, n)
        p = PointInP.from_adjoint_matrix(x)
        y = p.adjoint_matrix()
        # same line: y is a rational multiple of x
        k = next((i, j) for i in range(n) for j in range(n) if x[i][j])
        c = y[k[0]][k[1]] / x[k[0]][k[1]]
        assert la.scale(x, c) == y


def test_standard_points_torus():
    # every vector of the standard rep is SL-unstable, but torus semistability is basis dependent
    assert not torus_semistable(PointInP(Standard(2), (1, 0))).semistable
    # (1, 1) has weights −e1, −e2; modulo the diagonal their midpoint is 0
    p = PointInP(Standard(2), (1, 1))
    assert torus_semistable(p).semistable
    cert = instability_search(p)
    assert cert is not None and verify_certificate(p, cert)


def test_hm_weight_and_separator():
    e = PointInP.from_adjoint_matrix([[0, 1], [0, 0]])
    res = torus_semistable(e)
    assert not res.semistable
    assert hm_weight(e, res.lam) < 0
    assert hm_weight(e, OnePS((1, -1))) == -2
    with pytest.raises(ValueError):
        OnePS((1, 1))


def test_torus_certificates_are_valid(rng):
    trees = [Sym(2, Standard(3)), Wedge(2, Standard(4)), Tensor(Standard(2), Dual(Standard(2))), Adjoint(3)]
    for i in range(60):
        t = trees[i % len(trees)]
        u = [rng.choice([0, 0, 1, -2]) for _ in range(rep_dimension(t))]
        if not any(u):
            continue
        p = PointInP(t, tuple(u))
        res = torus_semistable(p)
        assert res.semistable == hull_oracle(p.active_weights())
        if res.semistable:
            comb = res.combination
            assert sum(comb.values()) == 1 and all(c > 0 for c in comb.values())
            avg = [sum(c * w[k] for w, c in comb.items()) for k in range(len(next(iter(comb))))]
            assert len(set(avg)) == 1
        else:
            assert all(sum(a * b for a, b in zip(w, res.lam.r)) > 0 for w in p.active_weights())


def test_adjoint_invariants_sl2():
    (c2,) = adjoint_invariants(2).polys
    assert c2(PointInP.from_adjoint_matrix([[1, 0], [0, -1]]).covector) == -1
    assert c2(PointInP.from_adjoint_matrix([[0, 1], [0, 0]]).covector) == 0
    assert c2.has_integer_coefficients()


@pytest.mark.parametrize("n", [2, 3, 4])
def test_adjoint_invariants_are_invariant(n):
    check_invariance(Adjoint(n), adjoint_invariants(n), samples=2)


def test_char_poly_matches_sympy(rng):
    for n in (2, 3, 4):
        x = random_trace_zero(rng, n)
        t = sympy.Symbol("t")
        expect = sympy.Poly(sympy.Matrix(x).charpoly(t).as_expr(), t).all_coeffs()
        assert la.charpoly(x) == [Fraction(int(sympy.numer(c)), int(sympy.denom(c))) for c in expect]


def test_non_invariant_generator_is_rejected():
    bogus = InvariantGeneratorSet((Poly.var(3, 0) * Poly.var(3, 2),))
    with pytest.raises(NotInvariant):
        check_invariance(Adjoint(2), bogus)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_adjoint_semistability_agrees_with_invariants(n, rng):
    gens = adjoint_invariants(n)
    for k in range(12):
        x = random_nilpotent(rng, n) if k % 3 == 0 else random_trace_zero(rng, n, bound=3)
        p = PointInP.from_adjoint_matrix(x)
        assert adjoint_semistable(x, cross_check=True) == (invariant_certificate(p, gens, check=False) is not None)
        assert adjoint_semistable(x) == (not is_nilpotent(x))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_nilpotents_get_integral_certificates(n, rng):
    for _ in range(5):
        p = PointInP.from_adjoint_matrix(random_nilpotent(rng, n))
        cert = instability_search(p, budget=50)
        assert cert is not None and verify_certificate(p, cert)
        g = cert.matrix()
        assert la.det(g) == 1 and all(v.denominator == 1 for row in g for v in row)


def test_triangularizer(rng):
    for n in (2, 3):
        x = random_nilpotent(rng, n)
        g = adjoint_triangularizer(x)
        assert g is not None and la.det(g) == 1
        y = covector_to_sl(n, translate_covector(Adjoint(n), g, PointInP.from_adjoint_matrix(x).covector))
        assert all(y[i][j] == 0 for i in range(n) for j in range(i + 1)) or all(
            y[i][j] == 0 for i in range(n) for j in range(i, n)
        )


def test_semistable_points_get_no_certificate(rng):
    for n in (2, 3):
        p = PointInP.from_adjoint_matrix(random_semistable_trace_zero(rng, n))
        assert instability_search(p, budget=20) is None


def test_forged_certificate_is_rejected():
    from heightlab.semistab import InstabilityCertificate

    p = PointInP.from_adjoint_matrix([[1, 0], [0, -1]])
    fake = InstabilityCertificate(((1, 0), (0, 1)), OnePS((1, -1)), p.covector)
    assert not verify_certificate(p, fake)


def test_generator_json_roundtrip():
    gens = adjoint_invariants(3)
    assert InvariantGeneratorSet.from_json(gens.to_json()) == gens


def test_hm_weight_standard_point():
    assert hm_weight(PointInP(Standard(2), (1, 1)), OnePS((1, -1))) == 1
