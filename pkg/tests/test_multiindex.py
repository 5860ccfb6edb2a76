import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from l1dbar.multiindex import MultiIndex, SignedIndex, enumerate_graded, log_coeff


index_dicts = st.dictionaries(st.integers(1, 9), st.integers(1, 5), max_size=5)


def test_factorial_sandwich_exact_integers():
    # s! <= s^s <= e^s * s! for s >= 1, checked in exact arithmetic up to 20.
    # The upper half is equivalent to s^s/s! <= e^s, and s^s/s! is the i = s
    # term of the series sum_i s^i/i!, which is a lower bound for e^s.
    for s in range(1, 21):
        fact = math.factorial(s)
        assert fact <= s**s
        series_lower = sum(Fraction(s**i, math.factorial(i)) for i in range(s + 1))
        assert Fraction(s**s, fact) <= series_lower


def test_log_coeff_frozen_values():
    assert log_coeff(MultiIndex.zero()) == 0.0
    # single-coordinate indices have coefficient ||k||^||k||/k^k = 1
    assert log_coeff(MultiIndex.single(3, 7)) == pytest.approx(0.0, abs=1e-12)
    assert log_coeff(MultiIndex.from_dict({1: 1, 2: 1})) == pytest.approx(math.log(4.0), rel=1e-14)
    assert log_coeff(MultiIndex.from_dict({1: 2, 2: 1})) == pytest.approx(math.log(27.0 / 4.0), rel=1e-14)


@given(index_dicts)
def test_log_coeff_matches_exact_integer_ratio(d):
    k = MultiIndex.from_dict(d)
    s = k.grade
    num = s**s if s else 1
    den = 1
    for _, e in k:
        den *= e**e
    expected = math.log(num) - math.log(den)
    assert log_coeff(k) == pytest.approx(expected, abs=1e-10)
    assert log_coeff(k) >= -1e-12


def test_enumerate_graded_frozen_order_dims2():
    got = [k.format() for k in enumerate_graded(2, 2)]
    assert got == ["", "2:1", "1:1", "2:2", "1:1,2:1", "1:2"]


def test_enumerate_graded_counts():
    # number of multi-indices in d coordinates with grade <= g is C(g+d, d)
    assert len(enumerate_graded(3, 4)) == math.comb(7, 3)
    assert len(enumerate_graded(1, 6)) == 7
    assert len(enumerate_graded(0, 3)) == 1


def test_enumerate_graded_is_graded_and_unique():
    ks = enumerate_graded(3, 3)
    grades = [k.grade for k in ks]
    assert grades == sorted(grades)
    assert len(set(ks)) == len(ks)


@given(index_dicts)
def test_parse_format_round_trip(d):
    k = MultiIndex.from_dict(d)
    assert MultiIndex.parse(k.format()) == k


def test_parse_rejects_malformed():
    with pytest.raises(ValueError):
        MultiIndex.parse("2:1,1:3")  # not increasing
    with pytest.raises(ValueError):
        MultiIndex.parse("0:1")  # 0-based coordinate
    with pytest.raises(ValueError):
        MultiIndex.parse("1:0")  # zero exponent stored
    with pytest.raises(ValueError):
        MultiIndex.parse("1-2")


def test_grade_support_and_helpers():
    k = MultiIndex.parse("1:2,4:1")
    assert k.grade == 3
    assert k.support == (1, 4)
    assert k.support_size == 2
    assert k.get(4) == 1 and k.get(2) == 0
    assert k.add(MultiIndex.single(2)).format() == "1:2,2:1,4:1"
    assert k.drop_above(4) is k
    assert k.drop_above(3) is None
    assert MultiIndex.zero().grade == 0
    assert not MultiIndex.zero()


def test_signed_index_difference_and_parts():
    a = MultiIndex.parse("1:2,2:1")
    b = MultiIndex.parse("2:1,3:2")
    k = SignedIndex.from_difference(a, b)
    assert k.format() == "1:2,3:-2"
    assert not k.is_nonnegative
    assert k.positive_part().format() == "1:2"
    assert k.negative_part().format() == "3:2"
    assert k.max_abs == 2
    assert SignedIndex.from_difference(a, MultiIndex.zero()).to_multiindex() == a


def test_signed_index_parse_and_errors():
    k = SignedIndex.parse("1:-3,5:2")
    assert k.get(1) == -3 and k.get(5) == 2 and k.get(2) == 0
    assert SignedIndex.parse("") == SignedIndex.zero()
    with pytest.raises(ValueError):
        SignedIndex.parse("1:0")
    with pytest.raises(ValueError):
        SignedIndex.from_dict({1: 1}).to_multiindex().increment(1, -5)
