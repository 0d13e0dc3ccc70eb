from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from tropfan.polynomials import HomPolynomial


def P(nvars, degree, d):
    return HomPolynomial.from_dict(nvars, degree, d)


def hom_polys(nvars=2, degree=2):
    exps = st.lists(st.integers(0, degree), min_size=nvars, max_size=nvars).filter(
        lambda e: sum(e) == degree
    )
    return st.dictionaries(exps.map(tuple), st.integers(-5, 5), max_size=4).map(
        lambda d: P(nvars, degree, d)
    )


def test_construction_sorted_and_clean():
    p = P(2, 2, {(0, 2): 1, (2, 0): 3, (1, 1): 0})
    assert p.terms == (((2, 0), 3), ((0, 2), 1))
    with pytest.raises(ValueError):
        HomPolynomial(2, 2, (((1, 0), 1),))


def test_arith():
    x2 = P(2, 2, {(2, 0): 1})
    y2 = P(2, 2, {(0, 2): 1})
    assert (x2 + y2).terms == (((2, 0), 1), ((0, 2), 1))
    assert (x2 - x2).is_zero()
    assert x2.scale(3).eval((2, 0)) == 12
    xy = P(2, 2, {(1, 1): 1})
    assert (x2 * y2).degree == 4
    assert (x2 * y2 - xy * xy).is_zero()


def test_eval_exact():
    p = P(2, 2, {(2, 0): 1, (1, 1): -2})
    assert p.eval((Fraction(1, 2), 3)) == Fraction(1, 4) - 3


def test_from_linear_form_and_compose():
    l = HomPolynomial.from_linear_form((1, -1))
    assert l.eval((5, 3)) == 2
    # substitute x -> s+t, y -> s-t into x*y gives s^2 - t^2
    xy = P(2, 2, {(1, 1): 1})
    q = xy.compose_linear([(1, 1), (1, -1)])
    assert q == P(2, 2, {(2, 0): 1, (0, 2): -1})


def test_restrict_to_span():
    p = P(3, 2, {(2, 0, 0): 1})
    r = p.restrict_to_span([(1, 1, 0), (0, 0, 1)])
    assert r == P(2, 2, {(2, 0): 1})


@settings(max_examples=100)
@given(hom_polys(), hom_polys())
def test_mul_commutes(p, q):
    assert p * q == q * p


@settings(max_examples=100)
@given(hom_polys(2, 1), hom_polys(2, 2))
def test_divide_exact_roundtrip(p, q):
    if p.is_zero():
        return
    prod = p * q
    assert prod.divide_exact(p) == q


def test_divide_exact_rejects():
    x2 = P(2, 2, {(2, 0): 1})
    y = P(2, 1, {(0, 1): 1})
    with pytest.raises(ValueError):
        x2.divide_exact(y)


def test_degree_mismatch():
    with pytest.raises(ValueError):
        P(2, 1, {(1, 0): 1}) + P(2, 2, {(2, 0): 1})


def test_str():
    p = P(2, 2, {(2, 0): 1, (1, 1): -2})
    assert str(p) == "x0^2 - 2*x0*x1"
    assert str(HomPolynomial.zero(2, 2)) == "0"
