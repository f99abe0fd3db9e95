from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gammacf.errors import ExpressionError, UnboundParameter
from gammacf.expr import Expr, evaluate_definitions
from gammacf.mpoly import MPoly, solve_polynomial_system
from gammacf.scalar import RationalFunction


def test_exact_arithmetic():
    assert Expr("1/3 + 1/6").evaluate({}) == F(1, 2)
    assert Expr("-(2*m-1)^2/4").evaluate({"m": F(2)}) == F(-9, 4)
    assert Expr("x**2").evaluate({"x": F(3)}) == 9
    assert Expr("2^-2").evaluate({}) == F(1, 4)


def test_names_and_symbolic_values():
    e = Expr("(x+alpha)*(x+beta)/4")
    assert e.names == {"x", "alpha", "beta"}
    x = RationalFunction.variable("x")
    value = e.evaluate({"x": x, "alpha": F(1, 3), "beta": F(1, 5)})
    assert value(F(3)) == F(10, 3) * F(16, 5) / 4


@pytest.mark.parametrize("text", ["", "1.5", "f(x)", "x^y", "a if b else c", "__import__('os')", "x[0]"])
def test_rejected_syntax(text):
    with pytest.raises(ExpressionError):
        Expr(text)


def test_unbound_name():
    with pytest.raises(UnboundParameter):
        Expr("x + y").evaluate({"x": F(1)})


def test_definitions_chain():
    env = evaluate_definitions((("s", Expr("a+b")), ("t", Expr("s^2"))), {"a": F(1), "b": F(2)})
    assert env["t"] == 9


def test_equality_uses_source():
    assert Expr("x+1") == Expr(Expr("x+1"))
    assert len({Expr("x"), Expr("x")}) == 1


@given(st.fractions(max_denominator=50), st.fractions(max_denominator=50))
def test_agrees_with_fraction_arithmetic(a, b):
    env = {"a": a, "b": b}
    assert Expr("(a+b)^2 - a*b").evaluate(env) == (a + b) ** 2 - a * b


def test_polynomial_system_solver():
    # x0 * x1 = 6, x0 + x1 = 5
    x0, x1 = MPoly.var(0, 2), MPoly.var(1, 2)
    eqs = [x0 * x1 - MPoly.const(6, 2), x0 + x1 - MPoly.const(5, 2)]
    sols = {(values[0], values[1]) for values, _ in solve_polynomial_system(eqs, 2)}
    assert sols == {(F(2), F(3)), (F(3), F(2))}


def test_cubic_branch_uses_rational_roots():
    # x0^3 - 6 x0^2 + 11 x0 - 6 = 0, x1 = 2 x0
    x0, x1 = MPoly.var(0, 2), MPoly.var(1, 2)
    cubic = x0 * x0 * x0 - 6 * x0 * x0 + 11 * x0 - MPoly.const(F(6), 2)
    sols = {(v[0], v[1]) for v, _ in solve_polynomial_system([cubic, x1 - 2 * x0], 2)}
    assert sols == {(F(1), F(2)), (F(2), F(4)), (F(3), F(6))}
