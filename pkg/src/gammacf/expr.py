"""The coefficient expression grammar.

Expressions are rational literals, identifiers, ``+ - * / ^`` and
parentheses.  ``**`` is accepted as a synonym for ``^``.  Parsing reuses the
Python tokenizer through :mod:`ast` and then rejects every node outside the
grammar, so ``1/3`` stays an exact rational and nothing is ever executed.

Evaluation is generic: the environment may bind names to Fractions,
RationalFunctions or mpmath numbers, and the result lives in whatever field
the bound values span.
"""
from __future__ import annotations

import ast
from fractions import Fraction

from .errors import ExpressionError, UnboundParameter

__all__ = ["Expr", "parse_expr", "evaluate_definitions"]

_BINOPS = {ast.Add: "+", ast.Sub: "-", ast.Mult: "*", ast.Div: "/", ast.Pow: "^"}


def _convert(node):
    if isinstance(node, ast.Expression):
        return _convert(node.body)
    if isinstance(node, ast.Constant):
        if isinstance(node.value, bool) or not isinstance(node.value, int):
            raise ExpressionError(f"only integer literals are allowed, got {node.value!r}")
        return ("num", Fraction(node.value))
    if isinstance(node, ast.Name):
        return ("name", node.id)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        inner = _convert(node.operand)
        return ("neg", inner) if isinstance(node.op, ast.USub) else inner
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        op = _BINOPS[type(node.op)]
        left, right = _convert(node.left), _convert(node.right)
        if op == "^":
            exponent = _constant_int(right)
            return ("pow", left, exponent)
        return (op, left, right)
    raise ExpressionError(f"unsupported syntax: {ast.dump(node)}")


def _constant_int(node):
    if node[0] == "num" and node[1].denominator == 1:
        return int(node[1])
    if node[0] == "neg":
        return -_constant_int(node[1])
    raise ExpressionError("exponents must be integer literals")


def _names(node, acc):
    kind = node[0]
    if kind == "name":
        acc.add(node[1])
    elif kind == "neg":
        _names(node[1], acc)
    elif kind == "pow":
        _names(node[1], acc)
    elif kind in ("+", "-", "*", "/"):
        _names(node[1], acc)
        _names(node[2], acc)
    return acc


def _eval(node, env):
    kind = node[0]
    if kind == "num":
        return node[1]
    if kind == "name":
        try:
            return env[node[1]]
        except KeyError:
            raise UnboundParameter(node[1]) from None
    if kind == "neg":
        return -_eval(node[1], env)
    if kind == "pow":
        base = _eval(node[1], env)
        k = node[2]
        if k >= 0:
            out = Fraction(1)
            for _ in range(k):
                out = out * base
            return out
        return 1 / _eval(("pow", node[1], -k), env)
    left = _eval(node[1], env)
    right = _eval(node[2], env)
    if kind == "+":
        return left + right
    if kind == "-":
        return left - right
    if kind == "*":
        return left * right
    if right == 0:
        raise ZeroDivisionError("division by zero in expression")
    return left / right


class Expr:
    """A parsed expression that remembers its source text.

    Equality and hashing use the source text, which is what the JSON format
    round-trips.
    """

    __slots__ = ("source", "_tree", "_names")

    def __init__(self, source):
        if isinstance(source, Expr):
            source = source.source
        if isinstance(source, Fraction):
            source = str(source)
        if isinstance(source, int):
            source = str(source)
        if not isinstance(source, str):
            raise ExpressionError(f"expression must be a string, got {type(source).__name__}")
        text = source.strip()
        if not text:
            raise ExpressionError("empty expression")
        try:
            tree = ast.parse(text.replace("^", "**"), mode="eval")
        except SyntaxError as exc:
            raise ExpressionError(f"cannot parse {source!r}: {exc.msg}") from None
        self.source = source
        self._tree = _convert(tree)
        self._names = frozenset(_names(self._tree, set()))

    @property
    def names(self) -> frozenset:
        return self._names

    def evaluate(self, env):
        return _eval(self._tree, env)

    __call__ = evaluate

    def __eq__(self, other):
        return isinstance(other, Expr) and other.source == self.source

    def __hash__(self):
        return hash(self.source)

    def __repr__(self):
        return f"Expr({self.source!r})"

    def __str__(self):
        return self.source


def parse_expr(source) -> Expr:
    return Expr(source)


def evaluate_definitions(definitions, env):
    """Extend ``env`` with named derived constants, in declaration order.

    ``definitions`` is a sequence of ``(name, Expr)`` pairs; later entries may
    use earlier ones.
    """
    out = dict(env)
    for name, expr in definitions:
        out[name] = Expr(expr).evaluate(out)
    return out
