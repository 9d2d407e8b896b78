from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from mucalc.poly import Polynomial


def test_canonical_merge_and_drop():
    p = Polynomial(2, [((1, 0), 2), ((1, 0), -2), ((0, 1), 3), ((0, 0), -1)])
    assert p.terms == (((0, 0), Fraction(-1)), ((0, 1), Fraction(3)))


def test_threshold():
    p = Polynomial.threshold(Fraction(19, 20))
    assert p.is_threshold() and p.constant() == Fraction(-19, 20)
    assert p([1]) == Fraction(1, 20)


def test_evaluation_exact():
    # 3*x1 + x2^2 - 10
    p = Polynomial(2, [((1, 0), 3), ((0, 2), 1), ((0, 0), -10)])
    assert p([2, 2]) == 0
    assert p([3, 1]) == 0
    assert p([1, 3]) == 2
    assert p.degree() == 2 and not p.is_linear()


def test_bad_exponents():
    with pytest.raises(ValueError):
        Polynomial(1, [((-1,), 1)])


coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=8)
points = st.lists(st.fractions(min_value=0, max_value=1, max_denominator=16), min_size=2, max_size=2)


@given(st.lists(st.tuples(st.tuples(st.integers(0, 2), st.integers(0, 2)), coeffs), max_size=5), points)
def test_interval_encloses_value(terms, pt):
    p = Polynomial(2, terms)
    lo, hi = p.interval([(x, x) for x in pt])
    assert lo <= p(pt) <= hi
    lo, hi = p.interval([(Fraction(0), Fraction(1))] * 2)
    assert lo <= p(pt) <= hi


@given(st.lists(st.tuples(st.tuples(st.integers(0, 2), st.integers(0, 2)), coeffs), max_size=5))
def test_equality_is_structural(terms):
    assert Polynomial(2, terms) == Polynomial(2, list(reversed(terms)))
    assert hash(Polynomial(2, terms)) == hash(Polynomial(2, list(reversed(terms))))
