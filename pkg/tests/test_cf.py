from fractions import Fraction as F

import mpmath as mp
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gammacf.cf import (
    CFSpec,
    CoefficientRule,
    FactorRule,
    FunctionCF,
    TermsCF,
    approximant_pair,
    approximant_values,
    bind_cf,
    equivalence_transform,
    evaluate,
    even_part,
    modified_approximant,
)
from gammacf.errors import TemplateDenominatorZero, UnboundParameter, ZeroFactor
from gammacf.fixtures import FIXTURES

ONES = CFSpec((), "0", CoefficientRule(1, [("1", "1")]))

nonzero = st.integers(-6, 6).filter(bool).map(F)
small = st.integers(-6, 6).map(F)


def terms_cf(draw_pairs):
    b0, pairs = draw_pairs
    return TermsCF(b0, pairs)


random_cfs = st.tuples(small, st.lists(st.tuples(nonzero, small), min_size=2, max_size=32)).map(terms_cf)


def test_approximant_examples():
    assert approximant_pair(TermsCF(F(1), [(F(1), F(2))]), 1).value == F(3, 2)
    ones = bind_cf(ONES, {})
    assert approximant_pair(ones, 4).value == F(3, 5)
    assert approximant_pair(ones, 0).value == 0


def test_float_mode_matches_exact():
    bauer = bind_cf(FIXTURES["bauer1872"].rhs, {"x": 1})
    exact = approximant_pair(bauer, 60).value
    for digits in (12, 30):
        approx = approximant_pair(bauer, 60, digits).value
        assert abs(float(approx) - float(exact)) < 1e-11


def test_float_mode_renormalizes_large_recurrences():
    big = bind_cf(CFSpec((), "0", CoefficientRule(1, [("1", "10^6")])), {})
    pair = approximant_pair(big, 400, 30)
    assert pair.scale_exponent > 0
    assert abs(float(pair.value) - 1e-6) < 1e-15


def test_bind_cf_examples():
    t2 = bind_cf(FIXTURES["theorem2"].rhs, {"x": 3, "alpha": F(1, 3), "beta": F(1, 3)})
    # one head term, then the rule's first numerator
    assert t2.term(2)[0] == F(2, 27)
    assert bind_cf(ONES, {}).term(17) == (1, 1)
    odd_only = CFSpec((), "0", CoefficientRule(2, [("1/(2*m-1)", "1"), ("1", "1")]))
    assert bind_cf(odd_only, {}).term(10)[0] == F(1, 9)


def test_bind_cf_errors():
    with pytest.raises(UnboundParameter):
        bind_cf(FIXTURES["theorem2"].rhs, {"x": 3})
    bad = CFSpec((), "0", CoefficientRule(1, [("1/(m-3)", "1")]))
    with pytest.raises(TemplateDenominatorZero) as info:
        bind_cf(bad, {})
    assert info.value.index == 3


def test_spec_json_round_trip():
    for fixture in FIXTURES.values():
        spec = fixture.rhs
        back = CFSpec.loads(spec.dumps())
        assert back.to_json() == spec.to_json()


def test_evaluate_examples():
    rep = evaluate(TermsCF(F(1), [(F(1), F(2))]), F(1, 10**10))
    assert rep.converged and rep.value == F(3, 2)
    bauer = bind_cf(FIXTURES["bauer1872"].rhs, {"x": 1})
    rep = evaluate(bauer, F(1, 10**30), digits=40)
    with mp.workdps(50):
        assert abs(rep.value.to_mpf(mp.mp) - mp.pi) < mp.mpf(10) ** -30
    assert rep.converged and rep.error_estimate <= F(1, 10**30)


def test_evaluate_reports_nonconvergence():
    rep = evaluate(bind_cf(FIXTURES["bauer1872"].rhs, {"x": 1}), F(1, 10**30), max_terms=64, accelerate=False)
    assert not rep.converged
    assert rep.terms_used <= 64


def test_evaluate_rejects_nonpositive_tol():
    with pytest.raises(ValueError):
        evaluate(bind_cf(ONES, {}), 0)


def test_modified_approximant_examples():
    ones = bind_cf(ONES, {})
    assert modified_approximant(ones, 5, 0) == approximant_pair(ones, 5).value
    assert modified_approximant(ones, 2, 1) == F(2, 3)
    cf = TermsCF(F(7, 2), [(F(1), F(1))])
    assert modified_approximant(cf, 0, F(3)) == F(7, 2) + 3


def test_equivalence_examples():
    ones = bind_cf(ONES, {})
    same = equivalence_transform(ones, lambda n: F(1))
    assert same.terms(8) == ones.terms(8)
    bauer = bind_cf(FIXTURES["bauer1872"].rhs, {"x": F(5, 2)})
    halved = equivalence_transform(bauer, lambda n: F(1, 2))
    assert approximant_values(halved, 10) == approximant_values(bauer, 10)
    with pytest.raises(ZeroFactor):
        equivalence_transform(ones, lambda n: F(n - 3)).term(3)


def test_equivalence_rescaling_by_rule():
    # b-terms (2m-1)(1+x) become 2m-1 after dividing by (1+x)
    x = F(4, 3)
    spec = CFSpec(("x",), "0", CoefficientRule(1, [("m^2", "(2*m-1)*(1+x)")]))
    cf = bind_cf(spec, {"x": x})
    scaled = equivalence_transform(cf, FactorRule(1, ("1/(1+x)",), {"x": x}))
    assert all(scaled.term(n)[1] == 2 * n - 1 for n in range(1, 11))
    assert approximant_values(scaled, 10) == approximant_values(cf, 10)


def test_even_part_examples():
    ev = even_part(bind_cf(ONES, {}))
    vals = approximant_values(ev, 3)
    assert vals[1:3] == [F(1, 2), F(3, 5)]
    finite = TermsCF(F(0), [(F(2), F(3)), (F(5), F(7))])
    assert approximant_values(even_part(finite), 1)[1] == approximant_values(finite, 2)[2]


def test_even_part_theorem1_matches_pq_form():
    fx = FIXTURES["theorem1-j1"]
    env = {"x": F(3), "alpha": F(1, 3), "beta": F(1, 3)}
    ev = evaluate(even_part(bind_cf(fx.rhs, env)), F(1, 10**25), digits=35, accelerate=False)
    pq = evaluate(bind_cf(fx.form("pq"), env), F(1, 10**25), digits=35)
    assert abs(ev.value - pq.value) < F(1, 10**24)


@given(random_cfs)
def test_determinant_formula(cf):
    prod = F(1)
    for n in range(1, cf.depth + 1):
        prod *= cf.term(n)[0]
        pair = approximant_pair(cf, n)
        assert pair.A * pair.B_prev - pair.A_prev * pair.B == (-1) ** (n - 1) * prod


@given(random_cfs, st.lists(nonzero, min_size=32, max_size=32))
def test_equivalence_preserves_approximants(cf, cs):
    eq = equivalence_transform(cf, lambda n: cs[n - 1])
    assert approximant_values(eq, cf.depth) == approximant_values(cf, cf.depth)


@given(st.tuples(small, st.lists(st.tuples(nonzero, nonzero), min_size=30, max_size=30)).map(terms_cf))
def test_even_part_invariant(cf):
    orig = approximant_values(cf, 30)
    ev = approximant_values(even_part(cf), 15)
    for n in range(1, 16):
        assert ev[n] == orig[2 * n]


@given(st.integers(8, 25), st.integers(8, 25))
def test_evaluate_is_monotone_in_information(d1, d2):
    cf = bind_cf(FIXTURES["cor2"].rhs, {"x": F(7, 3)})
    r1 = evaluate(cf, F(1, 10**d1), digits=40)
    r2 = evaluate(cf, F(1, 10**d2), digits=40)
    assert r1.converged and r2.converged
    assert abs(r1.value - r2.value) <= r1.error_estimate + r2.error_estimate


def test_lazy_function_cf():
    calls = []

    def fn(n):
        calls.append(n)
        return (F(1), F(n))

    cf = FunctionCF(F(0), fn)
    approximant_values(cf, 5)
    approximant_values(cf, 5)
    assert calls == [1, 2, 3, 4, 5]
