from fractions import Fraction

import pytest

from heightlab.flags import (
    Partition,
    compositions,
    constant_A,
    constant_A_as_printed,
    flag_degree,
    flag_dimension,
    flag_table,
    grassmannian_degree_as_printed,
    grassmannian_degree_staircase,
    hilbert_polynomial,
    interpolate,
    weyl_dim_value,
)

from oracles import hook_length_syt


def test_interpolate_recovers_polynomial():
    vals = [Fraction(3 * m**3 - m + 7, 2) for m in range(6)]
    assert interpolate(vals) == [Fraction(7, 2), Fraction(-1, 2), 0, Fraction(3, 2)]


def test_weyl_dimension_small_cases():
    # Gr(2,4): m·ω₂ has dimension (m+1)(m+2)²(m+3)/12
    for m in range(5):
        assert weyl_dim_value(Partition((2, 2)), m) == (m + 1) * (m + 2) ** 2 * (m + 3) // 12
    # projective space: Symᵐ of the standard rep
    assert weyl_dim_value(Partition((1, 3)), 2) == 10


def test_compositions():
    assert sorted(compositions(3)) == [(1, 1, 1), (1, 2), (2, 1), (3,)]


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_dimension_is_interpolation_degree(n):
    for parts in compositions(n):
        p = Partition(parts)
        assert len(hilbert_polynomial(p)) - 1 == flag_dimension(p)


@pytest.mark.parametrize("n", range(2, 7))
def test_grassmannian_degree_hook_oracle(n):
    for k in range(1, n):
        expect = hook_length_syt(k, n - k)
        assert flag_degree(Partition((k, n - k))) == expect
        assert grassmannian_degree_staircase(n, k) == expect


def test_known_degrees():
    assert flag_degree(Partition((2, 2))) == 2
    assert flag_degree(Partition((1, 1, 1))) == 6
    assert flag_degree(Partition((3, 1))) == 1


@pytest.mark.parametrize("n", range(2, 7))
def test_constant_A_projective(n):
    assert constant_A(Partition((n - 1, 1))) == Fraction(n - 1, n)


def test_printed_formulas_differ():
    # the printed Grassmannian degree carries (d−1)! and the printed A includes the zero factor
    assert grassmannian_degree_as_printed(4, 2) == Fraction(1, 2)
    assert grassmannian_degree_as_printed(4, 2) * 4 == flag_degree(Partition((2, 2)))
    assert constant_A_as_printed(Partition((2, 2))) == 0


def test_table_rows():
    rows = {r.partition.parts: r for r in flag_table(4)}
    assert rows[(2, 2)].d == 4 and rows[(2, 2)].a == 4
    assert rows[(3, 1)].a == Fraction(3, 4)
    assert rows[(1, 1, 2)].delta_printed is None


def test_bad_partition():
    with pytest.raises(ValueError):
        Partition((2, 0))
