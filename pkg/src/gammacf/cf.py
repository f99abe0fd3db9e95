"""Generalized continued fractions ``b0 + K(a_n / b_n)``.

A fraction is described by a :class:`CFSpec` (expression templates plus
parameter names) and bound to exact values with :func:`bind_cf`.  Derived
fractions (equivalence transforms, even parts, Bauer-Muir transforms) are
lazily generated :class:`ContinuedFraction` objects over the same scalars.

Index convention for periodic rules: with period ``P`` the term ``n`` (after
any explicit head terms) belongs to residue ``n mod P`` and its template is
evaluated at the block index ``m = ceil(n / P)``.  For ``P = 2`` this is the
familiar split ``n = 2m`` (residue 0) and ``n = 2m - 1`` (residue 1).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np
from mpmath import MPContext

from .errors import (
    ConfigError,
    ContractionUndefined,
    TemplateDenominatorZero,
    UnboundParameter,
    ZeroDenominator,
    ZeroDenominatorB,
    ZeroFactor,
)
from .expr import Expr, evaluate_definitions
from .scalar import BigFloat, Poly, RationalFunction, as_fraction

__all__ = [
    "ApproximantPair",
    "CFSpec",
    "CoefficientRule",
    "ContinuedFraction",
    "EvalReport",
    "FunctionCF",
    "RuleCF",
    "Template",
    "TermsCF",
    "approximant_pair",
    "approximant_values",
    "bind_cf",
    "block_index",
    "equivalence_transform",
    "evaluate",
    "even_part",
    "modified_approximant",
    "prepend",
    "shift_b0",
    "to_mp",
    "working_digits",
]

BLOCK_VAR = "m"


def block_index(n: int, period: int) -> tuple[int, int]:
    """Map a rule index ``n >= 1`` to ``(residue, block index m)``."""
    return n % period, -(-n // period)


def working_digits(digits: int, terms: int) -> int:
    """Precision used for recurrences: requested digits plus guard digits."""
    return digits + 15 + math.ceil(math.log10(max(terms, 1)))


def to_mp(ctx, value):
    """Convert an exact scalar (or BigFloat / mpf) into ``ctx``."""
    if isinstance(value, Fraction):
        return ctx.mpf(value.numerator) / value.denominator
    if isinstance(value, int):
        return ctx.mpf(value)
    if isinstance(value, BigFloat):
        return value.to_mpf(ctx)
    if isinstance(value, RationalFunction):
        raise TypeError("symbolic coefficients cannot be evaluated numerically")
    return ctx.mpf(value)


# ---------------------------------------------------------------------------
# Spec types
# ---------------------------------------------------------------------------


def _expr_tuple(items):
    return tuple(Expr(i) for i in items)


@dataclass(frozen=True)
class Template:
    """Rational function of the block index ``m``.

    Either a single expression in ``m`` or explicit numerator/denominator
    coefficient lists (constant term first) whose entries are parameter
    expressions.
    """

    expr: Optional[Expr] = None
    num_coeffs: Optional[tuple] = None
    den_coeffs: Optional[tuple] = None

    def __post_init__(self):
        if (self.expr is None) == (self.num_coeffs is None):
            raise ConfigError("a template needs exactly one of 'expr' or 'num_coeffs'")
        if self.expr is not None and not isinstance(self.expr, Expr):
            object.__setattr__(self, "expr", Expr(self.expr))
        if self.num_coeffs is not None:
            object.__setattr__(self, "num_coeffs", _expr_tuple(self.num_coeffs))
            den = self.den_coeffs if self.den_coeffs is not None else ("1",)
            object.__setattr__(self, "den_coeffs", _expr_tuple(den))

    @classmethod
    def of(cls, value) -> "Template":
        if isinstance(value, Template):
            return value
        if isinstance(value, dict):
            return cls.from_json(value)
        return cls(expr=Expr(value))

    @property
    def names(self) -> frozenset:
        if self.expr is not None:
            return self.expr.names - {BLOCK_VAR}
        out = set()
        for e in self.num_coeffs + self.den_coeffs:
            out |= e.names
        return frozenset(out)

    def evaluate(self, m, env):
        if self.expr is not None:
            local = dict(env)
            local[BLOCK_VAR] = m
            return self.expr.evaluate(local)
        num = Fraction(0)
        for c in reversed(self.num_coeffs):
            num = num * m + c.evaluate(env)
        den = Fraction(0)
        for c in reversed(self.den_coeffs):
            den = den * m + c.evaluate(env)
        if den == 0:
            raise ZeroDivisionError("template denominator vanishes")
        return num / den

    def to_rf(self, env) -> RationalFunction:
        """Rational function in ``m`` at numeric bindings."""
        if self.expr is not None:
            value = self.evaluate(RationalFunction.variable(BLOCK_VAR), env)
            if isinstance(value, RationalFunction):
                return value
            return RationalFunction.constant(value, BLOCK_VAR)
        num = Poly([c.evaluate(env) for c in self.num_coeffs], BLOCK_VAR)
        den = Poly([c.evaluate(env) for c in self.den_coeffs], BLOCK_VAR)
        return RationalFunction(num, den)

    def to_json(self):
        if self.expr is not None:
            return {"expr": self.expr.source}
        return {
            "num_coeffs": [c.source for c in self.num_coeffs],
            "den_coeffs": [c.source for c in self.den_coeffs],
        }

    @classmethod
    def from_json(cls, data) -> "Template":
        if isinstance(data, str):
            return cls(expr=Expr(data))
        if "expr" in data:
            return cls(expr=Expr(data["expr"]))
        if "num_coeffs" not in data:
            raise ConfigError("template needs 'expr' or 'num_coeffs'")
        return cls(num_coeffs=data["num_coeffs"], den_coeffs=data.get("den_coeffs", ["1"]))


@dataclass(frozen=True)
class CoefficientRule:
    """Period ``P`` and, per residue class, the ``(a, b)`` templates."""

    period: int
    cases: tuple

    def __post_init__(self):
        if self.period < 1:
            raise ConfigError("period must be at least 1")
        cases = tuple((Template.of(a), Template.of(b)) for a, b in self.cases)
        if len(cases) != self.period:
            raise ConfigError(f"period {self.period} needs {self.period} residue cases, got {len(cases)}")
        object.__setattr__(self, "cases", cases)

    @property
    def names(self) -> frozenset:
        out = set()
        for a, b in self.cases:
            out |= a.names | b.names
        return frozenset(out)


@dataclass(frozen=True)
class CFSpec:
    """Serializable description ``b0 + head terms + periodic rule``.

    ``head`` lists explicit leading ``(a, b)`` pairs; the rule then applies
    from the next term on with its own index starting at 1.
    ``definitions`` are named derived constants evaluated in order.
    """

    parameters: tuple
    b0: Expr
    rule: CoefficientRule
    head: tuple = ()
    definitions: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "parameters", tuple(self.parameters))
        object.__setattr__(self, "b0", Expr(self.b0))
        object.__setattr__(self, "head", tuple((Expr(a), Expr(b)) for a, b in self.head))
        defs = self.definitions.items() if isinstance(self.definitions, dict) else self.definitions
        object.__setattr__(self, "definitions", tuple((str(k), Expr(v)) for k, v in defs))

    @property
    def period(self) -> int:
        return self.rule.period

    @property
    def free_names(self) -> frozenset:
        used = set(self.b0.names) | set(self.rule.names)
        for a, b in self.head:
            used |= a.names | b.names
        for _, e in self.definitions:
            used |= e.names
        return frozenset(used - {name for name, _ in self.definitions})

    def to_json(self) -> dict:
        out = {"period": self.rule.period, "parameters": list(self.parameters)}
        if self.definitions:
            out["definitions"] = {k: v.source for k, v in self.definitions}
        out["b0"] = self.b0.source
        if self.head:
            out["head"] = [{"a": a.source, "b": b.source} for a, b in self.head]
        out["cases"] = [{"a": a.to_json(), "b": b.to_json()} for a, b in self.rule.cases]
        return out

    @classmethod
    def from_json(cls, data: dict) -> "CFSpec":
        try:
            period = int(data["period"])
            cases = tuple((Template.from_json(c["a"]), Template.from_json(c["b"])) for c in data["cases"])
            head = tuple((h["a"], h["b"]) for h in data.get("head", ()))
            return cls(
                parameters=tuple(data.get("parameters", ())),
                b0=data.get("b0", "0"),
                rule=CoefficientRule(period, cases),
                head=head,
                definitions=tuple(data.get("definitions", {}).items()),
            )
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"malformed CF spec: {exc}") from None

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    @classmethod
    def loads(cls, text: str) -> "CFSpec":
        try:
            return cls.from_json(json.loads(text))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"CF spec is not valid JSON: {exc}") from None


# ---------------------------------------------------------------------------
# Continued fraction objects
# ---------------------------------------------------------------------------


class ContinuedFraction:
    """Base class: a leading term ``b0`` and partial pairs ``term(n)``.

    ``depth`` is ``None`` for infinite fractions and the number of partial
    pairs for finite ones.
    """

    b0 = Fraction(0)
    depth: Optional[int] = None

    def term(self, n: int):
        raise NotImplementedError

    def terms(self, n_max: int):
        return [self.term(n) for n in range(1, n_max + 1)]

    @property
    def is_exact(self) -> bool:
        return isinstance(self.b0, (Fraction, int))

    def tail_rule(self):
        """Periodic structure usable for tail acceleration, or ``None``."""
        return None


class RuleCF(ContinuedFraction):
    """Fraction generated by a bound :class:`CFSpec`."""

    def __init__(self, spec: CFSpec, env: dict):
        self.spec = spec
        self.env = env
        self.b0 = spec.b0.evaluate(env)
        self.head = tuple((a.evaluate(env), b.evaluate(env)) for a, b in spec.head)
        self.period = spec.period
        self._numeric = all(isinstance(v, (Fraction, int)) for v in env.values())
        self._rfs = None
        if self._numeric:
            self._rfs = tuple((a.to_rf(env), b.to_rf(env)) for a, b in spec.rule.cases)
        self._cache = {}

    def term(self, n: int):
        if n < 1:
            raise IndexError("partial pairs start at n = 1")
        h = len(self.head)
        if n <= h:
            return self.head[n - 1]
        hit = self._cache.get(n)
        if hit is not None:
            return hit
        residue, m = block_index(n - h, self.period)
        if self._rfs is not None:
            a_rf, b_rf = self._rfs[residue]
            try:
                pair = (a_rf(Fraction(m)), b_rf(Fraction(m)))
            except ZeroDenominator:
                raise TemplateDenominatorZero(m, f"residue {residue}") from None
        else:
            a_t, b_t = self.spec.rule.cases[residue]
            try:
                pair = (a_t.evaluate(Fraction(m), self.env), b_t.evaluate(Fraction(m), self.env))
            except ZeroDivisionError:
                raise TemplateDenominatorZero(m, f"residue {residue}") from None
        if len(self._cache) < 4096:
            self._cache[n] = pair
        return pair

    def tail_rule(self):
        if self._rfs is None:
            return None
        return TailRule(self.period, len(self.head), self._rfs)

    def __repr__(self):
        return f"RuleCF(period={self.period}, head={len(self.head)}, b0={self.b0})"


@dataclass(frozen=True)
class TailRule:
    """Rational functions of the block index per residue, after ``head`` terms."""

    period: int
    head: int
    rfs: tuple


class TermsCF(ContinuedFraction):
    """Finite fraction given by explicit partial pairs."""

    def __init__(self, b0, terms: Sequence):
        self.b0 = b0
        self._terms = tuple(tuple(t) for t in terms)
        self.depth = len(self._terms)

    def term(self, n: int):
        if not 1 <= n <= self.depth:
            raise IndexError(f"finite fraction has {self.depth} terms, asked for {n}")
        return self._terms[n - 1]

    def __repr__(self):
        return f"TermsCF(b0={self.b0}, depth={self.depth})"


class FunctionCF(ContinuedFraction):
    """Lazily generated fraction; ``fn(n)`` returns the n-th partial pair."""

    def __init__(self, b0, fn: Callable[[int], tuple], depth: Optional[int] = None, label: str = ""):
        self.b0 = b0
        self._fn = fn
        self.depth = depth
        self.label = label
        self._cache = {}

    def term(self, n: int):
        if n < 1 or (self.depth is not None and n > self.depth):
            raise IndexError(f"term {n} outside 1..{self.depth}")
        hit = self._cache.get(n)
        if hit is None:
            hit = self._fn(n)
            self._cache[n] = hit
        return hit

    def __repr__(self):
        return f"FunctionCF({self.label or 'derived'}, b0={self.b0})"


def bind_cf(spec: CFSpec, bindings: dict) -> RuleCF:
    """Bind every free name of ``spec`` and return an evaluable fraction.

    Bindings may be exact rationals (or strings ``"p/q"``) or, for symbolic
    work, :class:`RationalFunction` values.  With numeric bindings every
    template denominator is checked for zeros at positive block indices.
    """
    env = {}
    for k, v in bindings.items():
        env[k] = v if isinstance(v, (RationalFunction, Fraction)) else as_fraction(v)
    missing = sorted(spec.free_names - set(env))
    if missing:
        raise UnboundParameter(missing[0])
    env = evaluate_definitions(spec.definitions, env)
    cf = RuleCF(spec, env)
    if cf._rfs is not None:
        for residue, (a_rf, b_rf) in enumerate(cf._rfs):
            for rf in (a_rf, b_rf):
                roots = positive_integer_roots(rf.den)
                if roots:
                    raise TemplateDenominatorZero(roots[0], f"residue {residue}")
    return cf


def positive_integer_roots(p: Poly) -> list:
    """Positive integers where ``p`` vanishes, found exactly."""
    if p.degree < 1:
        return []
    approx = np.roots([float(c) for c in reversed(p.coeffs)])
    found = set()
    for r in approx:
        if abs(r.imag) > 1e-6 * max(1.0, abs(r.real)):
            continue
        base = int(round(r.real))
        for cand in (base - 1, base, base + 1):
            if cand >= 1 and p(Fraction(cand)) == 0:
                found.add(cand)
    return sorted(found)


def prepend(cf: ContinuedFraction, numerator, b0=Fraction(0)) -> ContinuedFraction:
    """Return ``b0 + numerator / cf`` as a fraction."""

    def fn(n):
        if n == 1:
            return (numerator, cf.b0)
        return cf.term(n - 1)

    depth = None if cf.depth is None else cf.depth + 1
    return FunctionCF(b0, fn, depth, label="prepended")


def shift_b0(cf: ContinuedFraction, delta) -> ContinuedFraction:
    """Return ``delta + cf``."""
    return FunctionCF(cf.b0 + delta, cf.term, cf.depth, label="offset")


# ---------------------------------------------------------------------------
# Approximants
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ApproximantPair:
    """``A_n`` and ``B_n`` (and their predecessors) of the three-term recurrence.

    In float mode the four numbers are scaled by ``2**(-scale_exponent)``;
    ratios are unaffected.
    """

    n: int
    A: object
    B: object
    A_prev: object
    B_prev: object
    scale_exponent: int = 0

    @property
    def value(self):
        if self.B == 0:
            raise ZeroDenominatorB(self.n)
        return self.A / self.B


_RENORM_BITS = 512


def approximant_pair(cf: ContinuedFraction, n: int, mode="exact") -> ApproximantPair:
    """Run the forward recurrence to depth ``n``.

    ``mode`` is ``"exact"`` or a decimal precision (int) for float mode.
    Float mode keeps ``|B_n|`` below ``2**512`` by rescaling with powers of
    two and records the accumulated exponent.
    """
    if n < 0:
        raise ValueError("depth must be non-negative")
    if mode == "exact":
        A_prev, A, B_prev, B = Fraction(1), cf.b0, Fraction(0), Fraction(1)
        for k in range(1, n + 1):
            a, b = cf.term(k)
            A_prev, A = A, b * A + a * A_prev
            B_prev, B = B, b * B + a * B_prev
        return ApproximantPair(n, A, B, A_prev, B_prev)
    digits = int(mode)
    if digits <= 15:
        from .kernels import approximant_f64

        terms = cf.terms(n)
        a = np.array([float(t[0]) for t in terms], dtype=np.float64)
        b = np.array([float(t[1]) for t in terms], dtype=np.float64)
        A, B, A_prev, B_prev, exp2 = approximant_f64(a, b, float(cf.b0))
        wrap = lambda v: BigFloat(v, 15)
        return ApproximantPair(n, wrap(A), wrap(B), wrap(A_prev), wrap(B_prev), int(exp2))
    ctx = MPContext()
    ctx.dps = working_digits(digits, n)
    A_prev, A, B_prev, B = ctx.one, to_mp(ctx, cf.b0), ctx.zero, ctx.one
    exp2 = 0
    limit = ctx.ldexp(1, _RENORM_BITS)
    for k in range(1, n + 1):
        a, b = cf.term(k)
        a, b = to_mp(ctx, a), to_mp(ctx, b)
        A_prev, A = A, b * A + a * A_prev
        B_prev, B = B, b * B + a * B_prev
        if abs(B) > limit:
            A, B, A_prev, B_prev = (ctx.ldexp(v, -_RENORM_BITS) for v in (A, B, A_prev, B_prev))
            exp2 += _RENORM_BITS
    wrap = lambda v: BigFloat(v, ctx.dps)
    return ApproximantPair(n, wrap(A), wrap(B), wrap(A_prev), wrap(B_prev), exp2)


def approximant_values(cf: ContinuedFraction, n_max: int) -> list:
    """Exact approximants ``f_0 .. f_{n_max}`` (``None`` where ``B_n = 0``)."""
    out = []
    A_prev, A, B_prev, B = Fraction(1), cf.b0, Fraction(0), Fraction(1)
    out.append(A / B)
    for k in range(1, n_max + 1):
        a, b = cf.term(k)
        A_prev, A = A, b * A + a * A_prev
        B_prev, B = B, b * B + a * B_prev
        out.append(None if B == 0 else A / B)
    return out


def modified_approximant(cf: ContinuedFraction, n: int, r):
    """Return ``(A_n + r A_{n-1}) / (B_n + r B_{n-1})``."""
    pair = approximant_pair(cf, n, "exact")
    den = pair.B + r * pair.B_prev
    if den == 0:
        raise ZeroDenominator(f"B_{n} + r B_{n-1} vanishes")
    return (pair.A + r * pair.A_prev) / den


# ---------------------------------------------------------------------------
# Transformations
# ---------------------------------------------------------------------------


def equivalence_transform(cf: ContinuedFraction, factors) -> ContinuedFraction:
    """Rescale by ``c_n``: ``a'_n = c_n c_{n-1} a_n``, ``b'_n = c_n b_n``, ``c_0 = 1``.

    ``factors`` is a callable ``n -> c_n`` or a bound fraction-like object
    exposing ``factor(n)``.
    """
    get = factors if callable(factors) else factors.factor

    def c(n):
        if n == 0:
            return Fraction(1)
        v = get(n)
        if v == 0:
            raise ZeroFactor(n)
        return v

    def fn(n):
        a, b = cf.term(n)
        cn = c(n)
        return (cn * c(n - 1) * a, cn * b)

    return FunctionCF(cf.b0, fn, cf.depth, label="equivalent")


@dataclass(frozen=True)
class FactorRule:
    """Periodic equivalence factors ``c_n`` given by templates in ``m``."""

    period: int
    templates: tuple
    env: dict = field(default_factory=dict)

    def factor(self, n: int):
        residue, m = block_index(n, self.period)
        return Template.of(self.templates[residue]).evaluate(Fraction(m), self.env)


def even_part(cf: ContinuedFraction) -> ContinuedFraction:
    """Even contraction: the n-th approximant equals the input's 2n-th.

    ``a'_1 = a_1 b_2``, ``b'_1 = a_2 + b_1 b_2`` and for ``k >= 2``
    ``a'_k = -a_{2k-2} a_{2k-1} b_{2k} / b_{2k-2}``,
    ``b'_k = a_{2k} + b_{2k-1} b_{2k} + a_{2k-1} b_{2k} / b_{2k-2}``.
    """

    def fn(k):
        if k == 1:
            a1, b1 = cf.term(1)
            a2, b2 = cf.term(2)
            return (a1 * b2, a2 + b1 * b2)
        a_2k2, b_2k2 = cf.term(2 * k - 2)
        a_2k1, b_2k1 = cf.term(2 * k - 1)
        a_2k, b_2k = cf.term(2 * k)
        if b_2k2 == 0:
            raise ContractionUndefined(k, "b_{2k-2} = 0")
        return (-a_2k2 * a_2k1 * b_2k / b_2k2, a_2k + b_2k1 * b_2k + a_2k1 * b_2k / b_2k2)

    depth = None if cf.depth is None else cf.depth // 2
    return FunctionCF(cf.b0, fn, depth, label="even part")


# ---------------------------------------------------------------------------
# Numeric evaluation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EvalReport:
    value: BigFloat
    terms_used: int
    error_estimate: BigFloat
    converged: bool
    method: str = "plain"


def _digits_for_tol(tol) -> int:
    t = tol if isinstance(tol, BigFloat) else BigFloat(as_fraction(tol) if not isinstance(tol, float) else tol, 30)
    return max(15, int(math.ceil(-t.log10_abs())) + 5)


def evaluate(
    cf: ContinuedFraction,
    tol,
    max_terms: int = 100000,
    digits: Optional[int] = None,
    accelerate: bool = True,
    start: int = 16,
) -> EvalReport:
    """Evaluate at doubling depths until consecutive estimates agree to ``tol``.

    When the fraction comes from a period 1 or 2 rule whose normalized
    numerators grow like ``n**2``, each estimate closes the truncated fraction
    with an asymptotic expansion of its tail (a modified approximant);
    otherwise classical approximants are used.  ``method`` in the report
    says which.
    """
    from .tail import TailModel

    if isinstance(tol, BigFloat):
        tol_bf = tol
    elif isinstance(tol, float):
        tol_bf = BigFloat(tol, 30)
    else:
        tol_bf = BigFloat(as_fraction(tol), 30)
    if not tol_bf > 0:
        raise ValueError("tolerance must be positive")
    if digits is None:
        digits = _digits_for_tol(tol_bf)
    ctx = MPContext()
    ctx.dps = working_digits(digits, max_terms)
    tol_mp = tol_bf.to_mpf(ctx)

    model = None
    if accelerate:
        rule = cf.tail_rule()
        if rule is not None:
            model = TailModel.build(rule, ctx)
    method = "tail-asymptotic" if model is not None else "plain"

    wrap = lambda v: BigFloat(v, ctx.dps)
    depth_cap = max_terms if cf.depth is None else min(max_terms, cf.depth)
    head = model.head if model is not None else 0
    checkpoint = min(depth_cap, max(start, head + start))

    A_prev, A, B_prev, B = ctx.one, to_mp(ctx, cf.b0), ctx.zero, ctx.one
    n = 0
    previous = None
    limit = ctx.ldexp(1, _RENORM_BITS)
    while True:
        while n < checkpoint:
            n += 1
            a, b = cf.term(n)
            a, b = to_mp(ctx, a), to_mp(ctx, b)
            A_prev, A = A, b * A + a * A_prev
            B_prev, B = B, b * B + a * B_prev
            if abs(B) > limit:
                A, B, A_prev, B_prev = (ctx.ldexp(v, -_RENORM_BITS) for v in (A, B, A_prev, B_prev))
        if B == 0:
            raise ZeroDenominatorB(n)
        if model is not None and n - head >= 4:
            t = model.tail(n, cf.term(n)[1])
            den = B + t * B_prev
            estimate = (A + t * A_prev) / den if den != 0 else A / B
        else:
            estimate = A / B
        if cf.depth is not None and n >= cf.depth:
            return EvalReport(wrap(A / B), n, wrap(ctx.zero), True, "finite")
        if previous is not None:
            err = abs(estimate - previous)
            if err < tol_mp:
                return EvalReport(wrap(estimate), n, wrap(err), True, method)
            if n >= depth_cap:
                return EvalReport(wrap(estimate), n, wrap(err), False, method)
        elif n >= depth_cap:
            return EvalReport(wrap(estimate), n, wrap(ctx.inf), False, method)
        previous = estimate
        checkpoint = min(depth_cap, 2 * n)
