import itertools
from fractions import Fraction

import pytest
import sympy

from heightlab import linalg as la
from heightlab.hermlat import lattice_new
from heightlab.instances import random_invertible, random_lattice
from heightlab.reps import (
    Adjoint,
    CompactifiedRep,
    DetPower,
    DirectSum,
    Dual,
    NotHomogeneous,
    OrthogonalityViolation,
    RankMismatch,
    Standard,
    Sym,
    Tensor,
    Wedge,
    basis_labels,
    crep_from_json,
    crep_to_json,
    decompose_homogeneous,
    det_twist_check,
    homogeneity_degrees,
    homogeneous_degree,
    induced_gram,
    matrix_action,
    natural_gram,
    rep_dimension,
    rep_weights,
)
from heightlab.loglin import LogValue, Ordering

TREES = [
    Standard(2),
    Dual(Standard(3)),
    Sym(2, Standard(2)),
    Sym(3, Standard(2)),
    Sym(2, Standard(3)),
    Wedge(2, Standard(3)),
    Wedge(2, Standard(4)),
    Tensor(Standard(2), Dual(Standard(2))),
    DirectSum(Standard(2), DetPower(2, 1)),
    DetPower(3, -2),
    Adjoint(2),
    Adjoint(3),
    Sym(2, Dual(Standard(2))),
    Wedge(2, Sym(2, Standard(2))),
]


def test_dimensions():
    assert rep_dimension(Sym(3, Standard(3))) == 10
    assert rep_dimension(Wedge(2, Standard(4))) == 6
    assert rep_dimension(Adjoint(3)) == 8
    assert rep_dimension(Tensor(Standard(2), Standard(3 - 1))) == 4


def test_adjoint_basis_order():
    assert basis_labels(Adjoint(2)) == ["E12", "E21", "H1"]
    assert list(rep_weights(Adjoint(2)).weights) == [(1, -1), (-1, 1), (0, 0)]


def test_homogeneity():
    assert homogeneous_degree(Sym(3, Standard(2))) == 3
    assert homogeneous_degree(Adjoint(3)) == 0
    assert homogeneous_degree(DetPower(3, 2)) == 6
    assert homogeneity_degrees(DirectSum(Standard(2), Sym(2, Standard(2)))) == {1, 2}
    with pytest.raises(NotHomogeneous):
        homogeneous_degree(DirectSum(Standard(2), Sym(2, Standard(2))))


def test_rank_checks():
    with pytest.raises(RankMismatch):
        Tensor(Standard(2), Standard(3))
    with pytest.raises(RankMismatch):
        induced_gram(Standard(2), lattice_new(la.identity(3)))


@pytest.mark.parametrize("tree", TREES, ids=str)
def test_action_is_a_homomorphism(tree, rng):
    n = next(iter(_leaf_ranks(tree)))
    g, h = random_invertible(rng, n), random_invertible(rng, n)
    assert matrix_action(tree, la.matmul(g, h)) == la.matmul(matrix_action(tree, g), matrix_action(tree, h))
    assert matrix_action(tree, la.identity(n)) == la.identity(rep_dimension(tree))


@pytest.mark.parametrize("tree", TREES, ids=str)
def test_metric_is_equivariant(tree, rng):
    # the Gram of g*L on W is T(g)ᵀ·Gram(L)·T(g)
    n = next(iter(_leaf_ranks(tree)))
    g0 = random_lattice(rng, n).matrix()
    g = random_invertible(rng, n)
    moved = la.matmul(la.matmul(la.transpose(g), g0), g)
    t = matrix_action(tree, g)
    assert natural_gram(tree, moved) == la.matmul(la.matmul(la.transpose(t), natural_gram(tree, g0)), t)


@pytest.mark.parametrize("tree", TREES, ids=str)
def test_torus_weights_match_action(tree):
    n = next(iter(_leaf_ranks(tree)))
    primes = [2, 3, 5, 7][:n]
    act = matrix_action(tree, la.diag(primes))
    for i, w in enumerate(rep_weights(tree).weights):
        expect = Fraction(1)
        for p, e in zip(primes, w):
            expect *= Fraction(p) ** e
        assert act[i][i] == expect
        assert all(act[i][j] == 0 for j in range(len(act)) if j != i)


def _leaf_ranks(t):
    if isinstance(t, (Standard, Adjoint, DetPower)):
        return {t.n}
    kids = [getattr(t, k) for k in ("of", "left", "right") if hasattr(t, k)]
    return set().union(*(_leaf_ranks(k) for k in kids))


def _sym_oracle(gram, n):
    """Quotient metric on Symⁿ by brute force over index tuples of V^{⊗n}."""
    m = sympy.Matrix(gram).inv()
    dim = len(gram)
    monos = sorted(itertools.combinations_with_replacement(range(dim), n))
    by_mono = {mono: [t for t in itertools.product(range(dim), repeat=n) if tuple(sorted(t)) == mono] for mono in monos}
    dual = sympy.zeros(len(monos))
    for a, ma in enumerate(monos):
        for b, mb in enumerate(monos):
            dual[a, b] = sum(
                sympy.prod([m[i, j] for i, j in zip(s, t)]) for s in by_mono[ma] for t in by_mono[mb]
            )
    return dual.inv()


@pytest.mark.parametrize("n,dim", [(2, 2), (3, 2), (2, 3), (3, 3)])
def test_sym_quotient_metric_matches_symmetrization(n, dim, rng):
    gram = random_lattice(rng, dim).matrix()
    ours = natural_gram(Sym(n, Standard(dim)), gram)
    assert sympy.Matrix(ours) == _sym_oracle(gram, n)


def test_sym_at_identity():
    assert natural_gram(Sym(2, Standard(2)), la.identity(2)) == la.diag([1, Fraction(1, 2), 1])


def test_scale_multiplies_gram(rng):
    lat = random_lattice(rng, 2)
    t = Sym(2, Standard(2))
    scaled = induced_gram(CompactifiedRep(t, Fraction(3, 4)), lat).matrix()
    assert scaled == la.scale(induced_gram(t, lat).matrix(), Fraction(3, 4))


def test_adjoint_is_trace_form_sublattice():
    g = la.identity(2)
    assert la.det(natural_gram(Adjoint(2), g)) == 2
    assert natural_gram(Adjoint(2), g) == [[1, 0, 0], [0, 1, 0], [0, 0, 2]]


def test_direct_sum_blocks_are_orthogonal(rng):
    t = DirectSum(Sym(2, Standard(2)), DirectSum(Standard(2), DetPower(2, 1)))
    comps = decompose_homogeneous(t, random_lattice(rng, 2))
    assert [c.degree for c in comps] == [1, 2]
    assert [len(c.indices) for c in comps] == [2, 4]


def test_orthogonality_violation_is_detected(monkeypatch, rng):
    import heightlab.reps as reps

    t = DirectSum(Standard(2), Sym(2, Standard(2)))
    real = reps.natural_gram

    def coupled(tree, g):
        out = real(tree, g)
        if tree == t:
            out[0][2] = out[2][0] = Fraction(1, 9)
        return out

    monkeypatch.setattr(reps, "natural_gram", coupled)
    with pytest.raises(OrthogonalityViolation):
        decompose_homogeneous(t, random_lattice(rng, 2))


@pytest.mark.parametrize("tree", [Sym(2, Standard(2)), Wedge(2, Standard(3)), Adjoint(3), Standard(3), DetPower(2, 3)], ids=str)
def test_det_twist_is_constant_discrepancy(tree, rng):
    n = next(iter(_leaf_ranks(tree)))
    for _ in range(5):
        r = det_twist_check(tree, random_lattice(rng, n))
        assert r.status is Ordering.EQ
        assert r.discrepancy == r.normalization


def test_det_twist_raw_ordering_for_sym():
    # at the unit lattice the natural Sym² metric has det 1/2, so the raw comparison is LT
    r = det_twist_check(Sym(2, Standard(2)), lattice_new(la.identity(2)))
    assert r.ordering is Ordering.LT
    assert r.normalization == LogValue(Fraction(1, 2))


@pytest.mark.parametrize("tree", TREES, ids=str)
def test_json_roundtrip(tree):
    c = CompactifiedRep(tree, Fraction(2, 3))
    assert crep_from_json(crep_to_json(c)) == c


def test_adjoint_action_of_diagonal():
    act = matrix_action(Adjoint(2), la.diag([2, Fraction(1, 2)]))
    assert act == la.diag([4, Fraction(1, 4), 1])
