import threading
from fractions import Fraction as F

import mpmath as mp
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gammacf.errors import NonpositiveArgument, PoleArgument
from gammacf.fixtures import FIXTURES
from gammacf.gamma import GammaRatioSpec, bernoulli, euler_product_gamma, lhs_value, log_gamma
from gammacf.scalar import BigFloat


def mpf(v):
    return v.to_mpf(mp.mp)


def test_log_gamma_examples():
    assert mpf(log_gamma(1).value) == 0
    assert abs(mpf(log_gamma(5, 40).value) - mp.log(24)) < mp.mpf(10) ** -40
    half = mpf(log_gamma(F(1, 2), 40).value)
    assert abs(half - mp.log(mp.pi) / 2) < mp.mpf(10) ** -40
    # an independent low-precision route
    euler = euler_product_gamma(F(1, 2), 10**6, 15)
    assert abs(float(euler.value) - float(mp.exp(half))) / float(mp.exp(half)) < 1e-4


def test_log_gamma_matches_reference_at_high_precision():
    for z in (F(1, 7), F(13, 3), F(250, 11), F(10**4, 3)):
        got = log_gamma(z, 60)
        assert got.digits_valid >= 60
        ref = mp.loggamma(mp.mpf(z.numerator) / z.denominator)
        assert abs(mpf(got.value) - ref) <= abs(ref) * mp.mpf(10) ** -59 + mp.mpf(10) ** -60


def test_log_gamma_accepts_bigfloat():
    v = log_gamma(BigFloat(F(7, 2), 50), 40)
    assert abs(mpf(v.value) - mp.loggamma(mp.mpf(7) / 2)) < mp.mpf(10) ** -38


def test_log_gamma_rejects_nonpositive():
    for z in (0, F(-1, 2)):
        with pytest.raises(NonpositiveArgument):
            log_gamma(z)


def test_euler_product_examples():
    for n in (1, 10, 1000):
        v = euler_product_gamma(1, n)
        assert abs(float(v.value) - n / (n + 1)) < 1e-12
        assert abs(v.error_bound - 1 / n) < 1e-12
    assert abs(float(euler_product_gamma(2, 1000).value) - 1) < 1e-2
    with pytest.raises(PoleArgument):
        euler_product_gamma(-3, 10)


def test_euler_product_high_precision_route():
    lo = euler_product_gamma(F(1, 3), 2000, 15)
    hi = euler_product_gamma(F(1, 3), 2000, 30)
    assert abs(float(lo.value) - float(hi.value)) < 1e-12


@pytest.mark.parametrize("z", [F(1, 3), F(1, 2), F(2, 3), F(5, 4)])
def test_cross_oracle(z):
    euler = float(euler_product_gamma(z, 10**6, 15).value)
    stirling = float(mp.exp(mpf(log_gamma(z, 40).value)))
    assert abs(euler - stirling) / stirling < 5e-5


@given(st.fractions(min_value=F(1, 97), max_value=20, max_denominator=97))
def test_gamma_recurrence(z):
    lg0 = log_gamma(z, 40)
    lg1 = log_gamma(z + 1, 40)
    with mp.workdps(70):
        diff = mpf(lg1.value) - mpf(lg0.value) - mp.log(mp.mpf(z.numerator) / z.denominator)
        assert abs(diff) < mp.mpf(10) ** -38


@given(st.fractions(min_value=F(1, 50), max_value=300, max_denominator=50))
def test_precision_self_consistency(z):
    d = 30
    a, b = mpf(log_gamma(z, d).value), mpf(log_gamma(z, d + 20).value)
    assert abs(a - b) <= max(abs(b), 1) * mp.mpf(10) ** -(d - 2)


def test_bernoulli_cache_is_consistent_under_threads():
    out = []

    def work(k):
        out.append((k, bernoulli(k)))

    threads = [threading.Thread(target=work, args=(k,)) for k in range(40, 80)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    for k, b in out:
        p, q = mp.bernfrac(2 * k)
        assert b == F(int(p), int(q))
    assert bernoulli(1) == F(1, 6)


def test_bauer_lhs_is_pi():
    v = lhs_value(FIXTURES["bauer1872"].lhs, {"x": 1}, 40)
    assert abs(mpf(v.value) - mp.pi) < mp.mpf(10) ** -40


def test_corollary2_lhs():
    v = lhs_value(FIXTURES["cor2"].lhs, {"x": 2}, 40)
    ref = mp.gamma(mp.mpf(4) / 3) ** 3 / mp.gamma(mp.mpf(5) / 3) ** 3
    assert abs(mpf(v.value) - ref) < mp.mpf(10) ** -40 * ref


@pytest.mark.parametrize("a,b", [(F(0), F(1, 3)), (F(2, 5), F(0)), (F(1, 4), F(-1, 4))])
def test_theorem5_degenerate_parameters(a, b):
    v = lhs_value(FIXTURES["theorem5"].lhs, {"x": F(7, 2), "alpha": a, "beta": b}, 40)
    assert abs(mpf(v.value) - 1) < mp.mpf(10) ** -v.digits_valid


def test_ratio_spec_hints_and_shift_ratio():
    spec = GammaRatioSpec.build(num=("1",), den=("3",), scale=F(1, 2))
    kappa0, lam0 = spec.asymptotic_hints({})
    # Gamma((x+1)/2) / Gamma((x+3)/2) = 2/(x+1)
    assert kappa0 == 1 and lam0 == 2
    ratio = spec.shift_ratio({})
    assert spec.step == 2
    assert ratio(F(5)) == F(4, 3)  # f(5)/f(7) = (2/6)/(2/8)
