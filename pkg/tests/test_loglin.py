import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from heightlab.loglin import LogValue, Ordering, ZERO, lv_affine_compare, lv_combine, lv_from_rational, lv_log, lv_to_float

pos_rationals = st.fractions(min_value=Fraction(1, 10**6), max_value=10**6).filter(lambda q: q > 0)


def test_rejects_nonpositive():
    with pytest.raises(ValueError):
        lv_from_rational(0)
    with pytest.raises(ValueError):
        LogValue(Fraction(-1, 2))


def test_string_roundtrip():
    v = lv_from_rational(Fraction(7, 10))
    assert str(v) == "logv:7/10"
    assert LogValue.parse(str(v)) == v
    assert str(ZERO) == "logv:1/1"


def test_log_is_twice_half_log():
    assert lv_log(3) == lv_from_rational(9)
    assert lv_log(3) == 2 * lv_from_rational(3)


def test_float_digits():
    assert float(lv_to_float(lv_from_rational(4), 30)) == pytest.approx(math.log(2), rel=1e-15)
    assert str(lv_to_float(lv_from_rational(4), 10)) == "0.6931471806"
    assert lv_to_float(ZERO, 5) == 0


def test_ordering_of_sums():
    a, b = lv_from_rational(2), lv_from_rational(3)
    # 3·½ln2 vs 2·½ln3 : 8 < 9
    assert lv_affine_compare([(3, a)], [(2, b)]) is Ordering.LT
    assert lv_affine_compare([(2, a), (1, b)], [(1, lv_from_rational(12))]) is Ordering.EQ


@given(pos_rationals, pos_rationals)
def test_group_laws(p, q):
    a, b = LogValue(p), LogValue(q)
    assert (a + b) - b == a
    assert a + (-a) == ZERO
    assert lv_combine([(2, a), (-1, b)]) == a + a - b


@given(pos_rationals, pos_rationals)
def test_compare_matches_floats_when_separated(p, q):
    a, b = LogValue(p), LogValue(q)
    fa, fb = math.log(p) / 2, math.log(q) / 2
    if abs(fa - fb) > 1e-9:
        assert (a < b) == (fa < fb)
    assert a.compare(b) is lv_affine_compare([(1, a)], [(1, b)])
