from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gammacf.errors import AllZeroThroughTruncation, DivisionByZeroSeries, LambdaNotGreaterThanOne, NotLogNormalized
from gammacf.scalar import Poly, RationalFunction
from gammacf.series import (
    RateEstimate,
    Series1OverX,
    mortici_rate,
    rate_from_series,
    series_arith,
    series_from_rational,
    series_log,
)

x = RationalFunction.variable("x")
T = 10


def S(*coeffs, j0=0, order=T):
    return Series1OverX(j0, tuple(F(c) for c in coeffs), order)


def test_from_rational_examples():
    assert series_from_rational((x + 1) / x, 3).dense(0, 3) == [1, 1, 0, 0]
    s = series_from_rational(1 / (x * (x + 1)), 4)
    assert s.dense(0, 4) == [0, 0, 1, -1, 1]
    p = series_from_rational(x, 4)
    assert p.j0 == -1 and [c for c in p.coeffs if c] == [1]


def test_log_examples():
    log = series_log(S(1, 1))
    assert log.dense(0, 4) == [0, 1, F(-1, 2), F(1, 3), F(-1, 4)]
    assert series_log(S(1)).is_zero()
    both = series_arith("mul", S(1, 1), S(1, 2))
    assert series_log(both) == series_log(S(1, 1)) + series_log(S(1, 2))
    with pytest.raises(NotLogNormalized):
        series_log(S(2, 1))
    with pytest.raises(NotLogNormalized):
        series_log(series_from_rational(x, T))


def test_arith_examples():
    assert series_arith("add", S(0, 1), S(0, -1)).is_zero()
    assert series_arith("mul", S(1, 1), S(1, -1)).dense(0, 4) == [1, 0, -1, 0, 0]
    geo = series_arith("div", S(1), S(1, -1))
    assert geo.dense(0, T) == [1] * (T + 1)
    with pytest.raises(DivisionByZeroSeries):
        series_arith("div", S(1), Series1OverX.zero(T))


def test_truncation_is_tracked():
    # dividing by x^-2 loses two orders of validity
    q = series_arith("div", S(1, 0, 0, 1), S(0, 0, 1))
    assert q.order == T - 4
    assert series_arith("add", S(1, order=3), S(1, order=8)).order == 3


def test_rate_examples():
    s = Series1OverX(2, (F(3), 0, 0, F(1)), T)
    assert rate_from_series(s) == RateEstimate(2, F(3))
    assert rate_from_series(S(0, 1)) == RateEstimate(1, F(1))
    with pytest.raises(AllZeroThroughTruncation):
        rate_from_series(Series1OverX.zero(T))


def test_mortici_examples():
    diff = series_from_rational(1 / x - 1 / (x + 1), T)
    assert mortici_rate(rate_from_series(diff)) == RateEstimate(1, F(1))
    assert mortici_rate(RateEstimate(3, F(2))) == RateEstimate(2, F(1))
    with pytest.raises(LambdaNotGreaterThanOne):
        mortici_rate(RateEstimate(1, F(5)))


coef = st.fractions(min_value=-6, max_value=6, max_denominator=5)


def poly(cs):
    return Poly(cs, "x")


monic_dens = st.lists(coef, min_size=1, max_size=3).map(lambda cs: poly(cs + [1]))


@given(st.lists(coef, min_size=1, max_size=4), monic_dens, st.lists(coef, min_size=1, max_size=4), monic_dens)
def test_expansion_respects_products(n1, d1, n2, d2):
    r1, r2 = RationalFunction(poly(n1), d1), RationalFunction(poly(n2), d2)
    prod = series_arith("mul", series_from_rational(r1, 12), series_from_rational(r2, 12))
    direct = series_from_rational(r1 * r2, 12)
    for j in range(min(prod.j0, direct.j0), min(prod.order, direct.order) + 1):
        assert prod.coeff(j) == direct.coeff(j)


log_normal = st.lists(coef, min_size=1, max_size=6).map(lambda cs: S(1, *cs, order=12))


@given(log_normal, log_normal)
def test_log_is_additive(s1, s2):
    assert series_log(series_arith("mul", s1, s2)) == series_log(s1) + series_log(s2)


@given(st.integers(1, 5), st.lists(coef, min_size=0, max_size=2), st.lists(coef, min_size=1, max_size=2),
       coef.filter(bool))
def test_mortici_rate_matches_direct_rate(nu, extra, den_low, lead):
    # f = lead * (x^k + ...) / (x^(k+nu) + ...)
    k = len(extra)
    num = poly(extra + [lead])
    den = poly(den_low + [0] * (k + nu - len(den_low)) + [1])
    f = RationalFunction(num, den)
    direct = rate_from_series(series_from_rational(f, 16))
    diff = series_from_rational(f - f.shift(1), 16)
    assert direct.nu == nu
    assert mortici_rate(rate_from_series(diff)) == direct
