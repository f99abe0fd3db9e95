from fractions import Fraction as F

import mpmath as mp
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gammacf.errors import ZeroDenominator
from gammacf.scalar import BigFloat, Poly, RationalFunction, as_fraction, format_fraction, poly_eval, rf_reduce, rf_shift

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=30)
x = RationalFunction.variable("x")


def test_poly_eval_examples():
    assert poly_eval(Poly([0, 0, 1], "m"), F(3)) == 9
    assert poly_eval(Poly([], "m"), F(7)) == 0
    rho = F(5)
    assert poly_eval(Poly([rho, 0, 4], "m"), F(2)) == 21


def test_poly_eval_bigfloat():
    v = poly_eval(Poly([1, 1], "x"), BigFloat(F(1, 3), 30))
    assert isinstance(v, BigFloat)
    assert abs(v - BigFloat(F(4, 3), 30)) < BigFloat("1e-29", 30)


def test_rf_shift_examples():
    assert rf_shift(x, 1) == x + 1
    assert rf_shift(1 / x, 1) == 1 / (x + 1)
    assert rf_shift((x + 1) / x, -1) == x / (x - 1)


def test_rf_reduce_examples():
    assert rf_reduce(RationalFunction(Poly([-1, 0, 1]), Poly([-1, 1]))) == x + 1
    same = rf_reduce(RationalFunction(Poly([0, 1]), Poly([1])))
    assert same.num == Poly([0, 1]) and same.den == Poly([1])
    half = rf_reduce(RationalFunction(Poly([0, 2]), Poly([4])))
    assert half == x / 2
    assert half.den.lc == 1


def test_zero_denominator():
    with pytest.raises(ZeroDenominator):
        RationalFunction(Poly([1]), Poly([]))


def test_poly_leading_coefficient_invariant():
    p = Poly([1, 2, 0, 0])
    assert p.degree == 1 and p.lc == 2
    assert Poly([0, 0]).is_zero()


def test_fraction_format_round_trip():
    for q in (F(3, 7), F(-5, 2), F(4)):
        assert as_fraction(format_fraction(q)) == q
    assert format_fraction(F(4)) == "4/1"


@given(fractions, fractions.filter(lambda v: v != 0))
def test_field_axioms(a, b):
    assert (a + b) - b == a
    assert (a * b) / b == a


polys = st.lists(fractions, min_size=1, max_size=4).map(lambda cs: Poly(cs, "x"))


@given(polys, polys.filter(lambda p: not p.is_zero()), fractions)
def test_rf_shift_round_trip(p, q, delta):
    rf = RationalFunction(p, q)
    assert rf_reduce(rf_shift(rf_shift(rf, delta), -delta)) == rf


@given(polys, polys.filter(lambda p: not p.is_zero()))
def test_rf_reduced_form_is_coprime(p, q):
    rf = RationalFunction(p * Poly([1, 1]), q * Poly([1, 1]))
    assert rf == RationalFunction(p, q)
    assert rf.den.lc == 1


@given(st.fractions(min_value=-1000, max_value=1000, max_denominator=10**6),
       st.fractions(min_value=-1000, max_value=1000, max_denominator=10**6))
def test_bigfloat_guard_digits(a, b):
    # results at p and p + 20 digits agree to p - 5 digits
    p = 30
    lo = BigFloat(a, p) * BigFloat(b, p) + BigFloat(a, p)
    hi = BigFloat(a, p + 20) * BigFloat(b, p + 20) + BigFloat(a, p + 20)
    scale = max(abs(float(hi)), 1.0)
    assert abs(float(lo - hi)) <= scale * 10.0 ** (-(p - 5))


def test_bigfloat_precision_promotes():
    v = BigFloat(F(1, 3), 20) + BigFloat(F(1, 3), 50)
    assert v.digits == 50
    # accuracy is limited by the coarser operand
    with mp.workdps(60):
        assert abs(v.to_mpf(mp.mp) - mp.mpf(2) / 3) < mp.mpf(10) ** -19
