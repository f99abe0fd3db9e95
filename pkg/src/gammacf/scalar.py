"""Exact and arbitrary-precision scalars, polynomials and rational functions.

Exact rationals are :class:`fractions.Fraction`.  :class:`Poly` is generic
over any field whose elements support ``+ - * /`` and comparison with zero,
so the same class carries polynomials over the rationals, over ``Q(x)``
(coefficients that are themselves :class:`RationalFunction`) and over
mpmath floats.
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

from mpmath import libmp

from .errors import ZeroDenominator

__all__ = [
    "BigFloat",
    "Poly",
    "RationalFunction",
    "as_fraction",
    "format_fraction",
    "poly_eval",
    "rf_reduce",
    "rf_shift",
]


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def format_fraction(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def _is_zero(c) -> bool:
    return c == 0


# ---------------------------------------------------------------------------
# BigFloat
# ---------------------------------------------------------------------------

_RND = libmp.round_nearest


class BigFloat:
    """Binary floating point value with an explicit decimal precision.

    Values are immutable.  Arithmetic between operands of different
    precision runs at the larger one.  The arithmetic goes straight to
    ``mpmath.libmp`` with an explicit bit precision, so no global context is
    touched and instances are safe to share between threads.
    """

    __slots__ = ("_mpf", "digits")

    MIN_DIGITS = 10

    def __init__(self, value=0, digits: int = 30):
        if digits < self.MIN_DIGITS:
            raise ValueError(f"precision must be at least {self.MIN_DIGITS} digits")
        prec = libmp.dps_to_prec(digits)
        if isinstance(value, BigFloat):
            raw = libmp.mpf_pos(value._mpf, prec, _RND)
        elif isinstance(value, tuple):
            raw = libmp.mpf_pos(value, prec, _RND)
        elif hasattr(value, "_mpf_"):
            raw = libmp.mpf_pos(value._mpf_, prec, _RND)
        elif isinstance(value, bool):
            raw = libmp.from_int(int(value), prec, _RND)
        elif isinstance(value, int):
            raw = libmp.from_int(value, prec, _RND)
        elif isinstance(value, (Fraction, Rational)):
            raw = libmp.from_rational(value.numerator, value.denominator, prec, _RND)
        elif isinstance(value, float):
            raw = libmp.from_float(value, prec, _RND)
        elif isinstance(value, str):
            raw = libmp.from_str(value, prec, _RND)
        else:
            raise TypeError(f"cannot build a BigFloat from {type(value).__name__}")
        self._mpf = raw
        self.digits = int(digits)

    @classmethod
    def _raw(cls, mpf_tuple, digits):
        obj = cls.__new__(cls)
        obj._mpf = mpf_tuple
        obj.digits = digits
        return obj

    @property
    def prec(self) -> int:
        return libmp.dps_to_prec(self.digits)

    def to_mpf(self, ctx):
        """Convert into an mpf of the given mpmath context."""
        return ctx.make_mpf(self._mpf)

    def _coerce(self, other):
        if isinstance(other, BigFloat):
            return other
        return BigFloat(other, self.digits)

    def _binary(self, other, op, reflected=False):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        digits = max(self.digits, other.digits)
        prec = libmp.dps_to_prec(digits)
        lhs, rhs = (other._mpf, self._mpf) if reflected else (self._mpf, other._mpf)
        return BigFloat._raw(op(lhs, rhs, prec, _RND), digits)

    def __add__(self, other):
        return self._binary(other, libmp.mpf_add)

    def __radd__(self, other):
        return self._binary(other, libmp.mpf_add, True)

    def __sub__(self, other):
        return self._binary(other, libmp.mpf_sub)

    def __rsub__(self, other):
        return self._binary(other, libmp.mpf_sub, True)

    def __mul__(self, other):
        return self._binary(other, libmp.mpf_mul)

    def __rmul__(self, other):
        return self._binary(other, libmp.mpf_mul, True)

    def __truediv__(self, other):
        other_bf = self._coerce(other)
        if other_bf._mpf == libmp.fzero:
            raise ZeroDivisionError("BigFloat division by zero")
        return self._binary(other_bf, libmp.mpf_div)

    def __rtruediv__(self, other):
        if self._mpf == libmp.fzero:
            raise ZeroDivisionError("BigFloat division by zero")
        return self._binary(other, libmp.mpf_div, True)

    def __neg__(self):
        return BigFloat._raw(libmp.mpf_neg(self._mpf), self.digits)

    def __pos__(self):
        return self

    def __abs__(self):
        return BigFloat._raw(libmp.mpf_abs(self._mpf), self.digits)

    def _cmp(self, other):
        other = self._coerce(other)
        return libmp.mpf_cmp(self._mpf, other._mpf)

    def __eq__(self, other):
        try:
            return self._cmp(other) == 0
        except TypeError:
            return NotImplemented

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __hash__(self):
        return hash((self._mpf, self.digits))

    def __float__(self):
        return libmp.to_float(self._mpf)

    def __bool__(self):
        return self._mpf != libmp.fzero

    def sqrt(self):
        return BigFloat._raw(libmp.mpf_sqrt(self._mpf, self.prec, _RND), self.digits)

    def log10_abs(self) -> float:
        """Approximate ``log10|self|``; ``-inf`` for zero."""
        if self._mpf == libmp.fzero:
            return -math.inf
        man, exp = libmp.mpf_abs(self._mpf)[1:3]
        return math.log10(man) + exp * math.log10(2)

    def to_string(self, digits: int | None = None) -> str:
        return libmp.to_str(self._mpf, digits or self.digits)

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return f"BigFloat('{self.to_string()}', digits={self.digits})"


# ---------------------------------------------------------------------------
# Poly
# ---------------------------------------------------------------------------


def _norm_coeff(c):
    if isinstance(c, bool):
        return Fraction(int(c))
    if isinstance(c, int):
        return Fraction(c)
    return c


class Poly:
    """Dense univariate polynomial; ``coeffs[k]`` multiplies ``var**k``.

    The zero polynomial has an empty coefficient tuple and degree ``-1``.
    """

    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs=(), var: str = "x"):
        cs = [_norm_coeff(c) for c in coeffs]
        while cs and _is_zero(cs[-1]):
            cs.pop()
        self.coeffs = tuple(cs)
        self.var = var

    @classmethod
    def constant(cls, c, var="x"):
        return cls((c,), var)

    @classmethod
    def monomial(cls, degree: int, coeff=1, var="x"):
        return cls([0] * degree + [coeff], var)

    @classmethod
    def identity(cls, var="x"):
        return cls((0, 1), var)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def coeff(self, k: int):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def __call__(self, at):
        return poly_eval(self, at)

    def _lift(self, other):
        if isinstance(other, Poly):
            return other
        return Poly((other,), self.var)

    def __add__(self, other):
        if isinstance(other, RationalFunction):
            return NotImplemented
        other = self._lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly([self.coeff(k) + other.coeff(k) for k in range(n)], self.var)

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs], self.var)

    def __sub__(self, other):
        if isinstance(other, RationalFunction):
            return NotImplemented
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, RationalFunction):
            return NotImplemented
        if not isinstance(other, Poly):
            if _is_zero(other):
                return Poly((), self.var)
            return Poly([c * other for c in self.coeffs], self.var)
        if not self.coeffs or not other.coeffs:
            return Poly((), self.var)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if _is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(out, self.var)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative polynomial power")
        result = Poly((1,), self.var)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c):
        return Poly([a * c for a in self.coeffs], self.var)

    def divmod(self, other: "Poly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Poly((), self.var), self
        quot = [0] * (dq + 1)
        lc = other.lc
        for k in range(dq, -1, -1):
            c = rem[k + other.degree] / lc
            quot[k] = c
            if _is_zero(c):
                continue
            for i, b in enumerate(other.coeffs):
                rem[k + i] = rem[k + i] - c * b
        return Poly(quot, self.var), Poly(rem[: other.degree], self.var)

    def __floordiv__(self, other):
        return self.divmod(self._lift(other))[0]

    def __mod__(self, other):
        return self.divmod(self._lift(other))[1]

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self.scale(1 / self.lc)

    def deriv(self) -> "Poly":
        return Poly([k * c for k, c in enumerate(self.coeffs)][1:], self.var)

    def shift(self, delta) -> "Poly":
        """Return ``p(var + delta)``."""
        return self.compose_affine(1, delta)

    def compose_affine(self, a, b) -> "Poly":
        """Return ``p(a*var + b)`` by Horner's scheme on polynomials."""
        inner = Poly((b, a), self.var)
        out = Poly((), self.var)
        for c in reversed(self.coeffs):
            out = out * inner + c
        return out

    def compose(self, other: "Poly") -> "Poly":
        out = Poly((), other.var)
        for c in reversed(self.coeffs):
            out = out * other + c
        return out

    def with_var(self, var: str) -> "Poly":
        return Poly(self.coeffs, var)

    def map_coeffs(self, fn) -> "Poly":
        return Poly([fn(c) for c in self.coeffs], self.var)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, RationalFunction):
            return NotImplemented
        return self.coeffs == Poly((other,), self.var).coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly({list(self.coeffs)!r}, var={self.var!r})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if _is_zero(c):
                continue
            mono = "" if k == 0 else (self.var if k == 1 else f"{self.var}^{k}")
            if mono and c == 1:
                parts.append(mono)
            elif mono and c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"({c})*{mono}" if mono else f"({c})")
        return " + ".join(parts)


def poly_eval(p: Poly, at):
    """Horner evaluation; exact when ``at`` and the coefficients are exact."""
    acc = at * 0 if not isinstance(at, int) else Fraction(0)
    for c in reversed(p.coeffs):
        acc = acc * at + c
    return acc


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic greatest common divisor by Euclid over the coefficient field."""
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    return a.monic()


# ---------------------------------------------------------------------------
# RationalFunction
# ---------------------------------------------------------------------------


class RationalFunction:
    """Quotient of two polynomials with rational coefficients.

    The stored form is canonical: numerator and denominator are coprime and
    the denominator is monic, so equality is structural.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, var: str | None = None, _reduced=False):
        if not isinstance(num, Poly):
            num = Poly((num,), var or (den.var if isinstance(den, Poly) else "x"))
        if den is None:
            den = Poly((1,), num.var)
        elif not isinstance(den, Poly):
            den = Poly((den,), num.var)
        if den.is_zero():
            raise ZeroDenominator("rational function with zero denominator")
        if not _reduced:
            num, den = _reduce_pair(num, den)
        self.num = num
        self.den = den

    @classmethod
    def variable(cls, var="x"):
        return cls(Poly((0, 1), var), Poly((1,), var), _reduced=True)

    @classmethod
    def constant(cls, c, var="x"):
        return cls(Poly((c,), var), Poly((1,), var), _reduced=True)

    @property
    def var(self):
        return self.num.var

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("rational function is not constant")
        return self.num.coeff(0) / self.den.coeff(0)

    def _lift(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, Poly):
            return RationalFunction(other, Poly((1,), other.var), _reduced=True)
        return RationalFunction(Poly((other,), self.var), Poly((1,), self.var), _reduced=True)

    def __add__(self, other):
        o = self._lift(other)
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, (RationalFunction, Poly)):
            if _is_zero(other):
                return RationalFunction(Poly((), self.var), Poly((1,), self.var), _reduced=True)
            return RationalFunction(self.num.scale(other), self.den, _reduced=True)
        o = self._lift(other)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __pow__(self, k: int):
        if k >= 0:
            return RationalFunction(self.num ** k, self.den ** k, _reduced=True)
        if self.is_zero():
            raise ZeroDivisionError("negative power of zero")
        return RationalFunction(self.den ** (-k), self.num ** (-k))

    def __call__(self, at):
        d = poly_eval(self.den, at)
        if d == 0:
            raise ZeroDenominator(f"denominator vanishes at {at}")
        return poly_eval(self.num, at) / d

    def shift(self, delta) -> "RationalFunction":
        return rf_shift(self, delta)

    def compose_affine(self, a, b) -> "RationalFunction":
        return RationalFunction(self.num.compose_affine(a, b), self.den.compose_affine(a, b))

    def __eq__(self, other):
        if isinstance(other, RationalFunction):
            return self.num == other.num and self.den == other.den
        if isinstance(other, Poly):
            return self.den.degree == 0 and self.num == other
        try:
            o = self._lift(other)
        except TypeError:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RationalFunction({self.num!r}, {self.den!r})"

    def __str__(self):
        if self.den.degree == 0 and self.den.coeff(0) == 1:
            return str(self.num)
        return f"({self.num})/({self.den})"


def _reduce_pair(num: Poly, den: Poly):
    if num.is_zero():
        return Poly((), num.var), Poly((1,), num.var)
    if den.degree > 0 and num.degree >= 0:
        g = poly_gcd(num, den)
        if g.degree > 0:
            num = num.divmod(g)[0]
            den = den.divmod(g)[0]
    lc = den.lc
    if lc != 1:
        inv = 1 / lc if not isinstance(lc, int) else Fraction(1, lc)
        num = num.scale(inv)
        den = den.scale(inv)
    return num, den


def rf_reduce(rf: RationalFunction) -> RationalFunction:
    """Return the canonical coprime form with a monic denominator."""
    if rf.den.is_zero():
        raise ZeroDenominator("rational function with zero denominator")
    num, den = _reduce_pair(rf.num, rf.den)
    return RationalFunction(num, den, _reduced=True)


def rf_shift(rf: RationalFunction, delta) -> RationalFunction:
    """Return ``rf(x + delta)`` in reduced form."""
    delta = as_fraction(delta) if not isinstance(delta, Fraction) else delta
    return RationalFunction(rf.num.shift(delta), rf.den.shift(delta))
