"""Truncated expansions in powers of ``1/x`` with exact rational coefficients."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    AllZeroThroughTruncation,
    DivisionByZeroSeries,
    LambdaNotGreaterThanOne,
    NotLogNormalized,
)
from .scalar import RationalFunction, as_fraction

__all__ = [
    "RateEstimate",
    "Series1OverX",
    "mortici_rate",
    "rate_from_series",
    "series_arith",
    "series_from_rational",
    "series_log",
]


@dataclass(frozen=True)
class Series1OverX:
    """``sum_{j=j0}^{order} coeffs[j - j0] * x**(-j)``, known exactly through ``x**(-order)``.

    A negative ``j0`` carries a polynomial part.  The coefficient tuple is
    never trimmed at the top, so ``order`` alone records validity.
    """

    j0: int
    coeffs: tuple
    order: int

    def __post_init__(self):
        cs = [as_fraction(c) for c in self.coeffs]
        j0 = self.j0
        # drop leading zeros so j0 is the true leading index when nonzero
        while cs and cs[0] == 0:
            cs.pop(0)
            j0 += 1
        keep = max(0, self.order - j0 + 1)
        cs = cs[:keep]
        if not cs:
            j0 = self.order + 1
        object.__setattr__(self, "j0", j0)
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def zero(cls, order: int) -> "Series1OverX":
        return cls(order + 1, (), order)

    @classmethod
    def constant(cls, c, order: int) -> "Series1OverX":
        return cls(0, (as_fraction(c),), order)

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, j: int) -> Fraction:
        if j > self.order:
            raise IndexError(f"coefficient x^-{j} lies beyond the truncation order {self.order}")
        k = j - self.j0
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    def dense(self, start: int, stop: int) -> list:
        """Coefficients for ``j = start .. stop`` inclusive."""
        return [self.coeff(j) for j in range(start, stop + 1)]

    def __add__(self, other):
        return series_arith("add", self, other)

    def __sub__(self, other):
        return series_arith("sub", self, other)

    def __mul__(self, other):
        return series_arith("mul", self, other)

    def __truediv__(self, other):
        return series_arith("div", self, other)

    def __neg__(self):
        return Series1OverX(self.j0, tuple(-c for c in self.coeffs), self.order)

    def __str__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            j = self.j0 + k
            mono = "" if j == 0 else (f"x^{-j}" if j < 0 else f"x^-{j}")
            terms.append(f"({c})*{mono}" if mono else f"({c})")
        body = " + ".join(terms) if terms else "0"
        return f"{body} + O(x^-{self.order + 1})"


def _lift(s, like: Series1OverX) -> Series1OverX:
    if isinstance(s, Series1OverX):
        return s
    return Series1OverX.constant(s, like.order)


def series_from_rational(rf: RationalFunction, order: int) -> Series1OverX:
    """Expansion of ``rf`` at ``x = oo`` through ``x**(-order)``."""
    num, den = rf.num, rf.den
    if num.is_zero():
        return Series1OverX.zero(order)
    dn, dd = num.degree, den.degree
    j0 = dd - dn
    count = max(0, order - j0 + 1)
    N = [num.coeff(dn - i) for i in range(count)]
    D = [den.coeff(dd - i) for i in range(count)]
    out = []
    for k in range(count):
        s = N[k] - sum(out[i] * D[k - i] for i in range(max(0, k - dd), k))
        out.append(s / D[0])
    return Series1OverX(j0, tuple(out), order)


def _mul(a: Series1OverX, b: Series1OverX) -> Series1OverX:
    if a.is_zero() or b.is_zero():
        # validity of a product with a zero factor is bounded by the other's leading term
        lead_a = a.j0 if not a.is_zero() else a.order + 1
        lead_b = b.j0 if not b.is_zero() else b.order + 1
        return Series1OverX.zero(min(a.order + lead_b, b.order + lead_a))
    order = min(a.order + b.j0, b.order + a.j0)
    j0 = a.j0 + b.j0
    n = order - j0 + 1
    if n <= 0:
        return Series1OverX.zero(order)
    out = [Fraction(0)] * n
    for i, x in enumerate(a.coeffs[:n]):
        if x == 0:
            continue
        for k, y in enumerate(b.coeffs[: n - i]):
            out[i + k] += x * y
    return Series1OverX(j0, tuple(out), order)


def _reciprocal(b: Series1OverX) -> Series1OverX:
    if b.is_zero():
        raise DivisionByZeroSeries("divisor vanishes through its truncation order")
    n = b.order - b.j0 + 1
    lead = b.coeffs[0]
    out = []
    for k in range(n):
        s = Fraction(1) if k == 0 else Fraction(0)
        s -= sum(out[i] * b.coeff(b.j0 + k - i) for i in range(k))
        out.append(s / lead)
    return Series1OverX(-b.j0, tuple(out), b.order - 2 * b.j0)


def series_arith(op: str, lhs, rhs) -> Series1OverX:
    """Exact truncated ``add``, ``sub``, ``mul`` or ``div``."""
    if not isinstance(lhs, Series1OverX):
        lhs = _lift(lhs, rhs)
    rhs = _lift(rhs, lhs)
    if op in ("add", "sub"):
        order = min(lhs.order, rhs.order)
        start = min(lhs.j0, rhs.j0)
        if start > order:
            return Series1OverX.zero(order)
        sign = 1 if op == "add" else -1
        cs = [lhs.coeff(j) + sign * rhs.coeff(j) for j in range(start, order + 1)]
        return Series1OverX(start, tuple(cs), order)
    if op == "mul":
        return _mul(lhs, rhs)
    if op == "div":
        return _mul(lhs, _reciprocal(rhs))
    raise ValueError(f"unknown series operation {op!r}")


def series_log(s: Series1OverX) -> Series1OverX:
    """``log s`` for ``s = 1 + O(1/x)``, via ``(log s)' = s'/s`` in ``z = 1/x``."""
    if s.is_zero() or s.j0 < 0 or s.coeff(0) != 1:
        raise NotLogNormalized("log needs a series of the form 1 + O(1/x)")
    T = s.order
    c = s.dense(0, T)
    # s'(z) coefficients: (k+1) c_{k+1}
    d = [(k + 1) * c[k + 1] for k in range(T)]
    q = []
    for k in range(T):
        v = d[k] - sum(q[i] * c[k - i] for i in range(k))
        q.append(v)
    out = [Fraction(0)] + [q[k] / (k + 1) for k in range(T)]
    return Series1OverX(0, tuple(out), T)


@dataclass(frozen=True)
class RateEstimate:
    """``x**nu * f(x) -> c`` with ``c != 0``."""

    nu: int
    c: Fraction

    def __post_init__(self):
        if self.c == 0:
            raise ValueError("a rate estimate needs a nonzero constant")


def rate_from_series(s: Series1OverX) -> RateEstimate:
    if s.is_zero():
        raise AllZeroThroughTruncation(f"series vanishes through x^-{s.order}")
    return RateEstimate(s.j0, s.coeffs[0])


def mortici_rate(diff: RateEstimate) -> RateEstimate:
    """Rate of ``f`` from the rate ``(lam, l)`` of ``f(x) - f(x+1)``: ``(lam - 1, l / (lam - 1))``."""
    if diff.nu <= 1:
        raise LambdaNotGreaterThanOne(f"need an order above 1, got {diff.nu}")
    return RateEstimate(diff.nu - 1, diff.c / (diff.nu - 1))
