"""High-precision log-gamma and gamma-ratio products.

``log_gamma`` raises the argument until Stirling's series, truncated where
its explicit remainder bound drops below the target, is accurate enough.
The Bernoulli numbers behind the series are exact fractions cached in a
lock-protected list.  ``euler_product_gamma`` is an independent, slowly
converging cross-check.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from mpmath import MPContext, bernfrac

from .errors import ConfigError, NonpositiveArgument, PoleArgument
from .expr import Expr, evaluate_definitions
from .scalar import BigFloat, Poly, RationalFunction, as_fraction

__all__ = [
    "GammaFactor",
    "GammaRatioSpec",
    "OracleValue",
    "bernoulli",
    "euler_product_gamma",
    "lhs_value",
    "log_gamma",
]

GUARD_DIGITS = 15


@dataclass(frozen=True)
class OracleValue:
    value: BigFloat
    digits_valid: int
    error_bound: Optional[float] = None


# ---------------------------------------------------------------------------
# Bernoulli cache
# ---------------------------------------------------------------------------

_BERN_LOCK = threading.Lock()
_BERN_EVEN: tuple = (Fraction(1),)  # B_0, B_2, B_4, ...


def bernoulli(k2: int) -> Fraction:
    """Exact even-index Bernoulli number ``B_{2*k2}``."""
    global _BERN_EVEN
    table = _BERN_EVEN
    if k2 < len(table):
        return table[k2]
    with _BERN_LOCK:
        table = _BERN_EVEN
        if k2 >= len(table):
            grown = list(table)
            for j in range(len(table), max(k2 + 1, 2 * len(table))):
                p, q = bernfrac(2 * j)
                grown.append(Fraction(int(p), int(q)))
            # publish a complete tuple in one assignment
            _BERN_EVEN = tuple(grown)
            table = _BERN_EVEN
    return table[k2]


def _stirling_bound(k_terms: int, w: Fraction) -> float:
    """log10 of the remainder bound after ``k_terms`` terms at real ``w > 0``."""
    b = abs(bernoulli(k_terms + 1))
    n = 2 * k_terms + 2
    return (math.log10(b.numerator) - math.log10(b.denominator)
            - math.log10(n * (n - 1)) - (n - 1) * math.log10(float(w)))


# ---------------------------------------------------------------------------
# log-gamma
# ---------------------------------------------------------------------------


def _log_gamma_mp(ctx, z, z_exact: Optional[Fraction], digits: int):
    """ln Gamma(z) in ``ctx``; returns (value, log10 error bound)."""
    target = -(digits + 5)
    w_min = 0.4 * digits + 10
    shift = max(0, math.ceil(w_min - float(z)))
    if z_exact is not None:
        w_exact = z_exact + shift
        w = ctx.mpf(w_exact.numerator) / w_exact.denominator
        prod = Fraction(1)
        for i in range(shift):
            prod *= z_exact + i
        lower = ctx.log(ctx.mpf(prod.numerator)) - ctx.log(ctx.mpf(prod.denominator)) if shift else ctx.zero
    else:
        w_exact = Fraction(float(z) + shift)
        w = z + shift
        lower = ctx.zero
        p = ctx.one
        for i in range(shift):
            p *= z + i
        if shift:
            lower = ctx.log(p)
    k = 1
    while _stirling_bound(k, w_exact) > target:
        k += 1
        if k > 4 * digits + 50:
            break
    bound = 10.0 ** _stirling_bound(k, w_exact)
    acc = (w - ctx.mpf(1) / 2) * ctx.log(w) - w + ctx.log(2 * ctx.pi) / 2
    inv_w = 1 / w
    inv_w2 = inv_w * inv_w
    power = inv_w
    for j in range(1, k + 1):
        b = bernoulli(j)
        acc += ctx.mpf(b.numerator) / (b.denominator * (2 * j) * (2 * j - 1)) * power
        power *= inv_w2
    # truncation bound plus rounding in the two large terms that get subtracted
    rounding = 10.0 ** (-ctx.dps + 2) * (abs(float(acc)) + abs(float(lower)) + 1.0)
    return acc - lower, math.log10(bound + rounding)


def log_gamma(z, digits: int = 40) -> OracleValue:
    """``ln Gamma(z)`` for real ``z > 0`` to ``digits`` significant digits."""
    if digits < 10:
        digits = 10
    z_exact = None
    if isinstance(z, (Fraction, int, str)):
        z_exact = as_fraction(z)
        if z_exact <= 0:
            raise NonpositiveArgument(f"log_gamma needs z > 0, got {z_exact}")
    elif isinstance(z, BigFloat):
        if not z > 0:
            raise NonpositiveArgument(f"log_gamma needs z > 0, got {z}")
    else:
        raise TypeError(f"unsupported argument type {type(z).__name__}")
    ctx = MPContext()
    ctx.dps = digits + GUARD_DIGITS
    zz = z.to_mpf(ctx) if isinstance(z, BigFloat) else ctx.mpf(z_exact.numerator) / z_exact.denominator
    if z_exact is not None and z_exact.denominator == 1 and z_exact <= 2:
        return OracleValue(BigFloat(0, digits + GUARD_DIGITS), digits + GUARD_DIGITS, 0.0)
    value, bound = _log_gamma_mp(ctx, zz, z_exact, digits)
    # the bound is absolute; significant digits follow from the magnitude
    mag = float(ctx.log10(abs(value))) if value != 0 else 0.0
    valid = min(digits + GUARD_DIGITS - 2, math.floor(mag - bound))
    return OracleValue(BigFloat(value, ctx.dps), max(0, valid), 10.0 ** bound)


# ---------------------------------------------------------------------------
# Euler product
# ---------------------------------------------------------------------------


def euler_product_gamma(z, n_terms: int, digits: int = 15) -> OracleValue:
    """``n! n**z / (z (z+1) ... (z+n))`` as an approximation to ``Gamma(z)``.

    The relative error is about ``z (z+1) / (2 n)``, reported as
    ``error_bound`` and reflected in ``digits_valid``.
    """
    zf = as_fraction(z) if not isinstance(z, BigFloat) else None
    if zf is not None and zf <= 0 and zf.denominator == 1:
        raise PoleArgument(f"Gamma has a pole at {zf}")
    if n_terms < 1:
        raise ValueError("need at least one factor")
    zfloat = float(zf) if zf is not None else float(z)
    if digits <= 15:
        from .kernels import log1p_ratio_sum_f64

        # ln of the product: z ln n - ln z - sum_{k=1}^n ln(1 + z/k)
        s = log1p_ratio_sum_f64(zfloat, n_terms)
        log_val = zfloat * math.log(n_terms) - math.log(abs(zfloat)) - s
        sign = -1.0 if zfloat < 0 and math.floor(-zfloat) % 2 == 0 else 1.0
        value = BigFloat(sign * math.exp(log_val), 15)
    else:
        ctx = MPContext()
        ctx.dps = digits + 10
        zz = ctx.mpf(zf.numerator) / zf.denominator if zf is not None else z.to_mpf(ctx)
        acc = zz * ctx.log(n_terms) - ctx.log(abs(zz))
        for k in range(1, n_terms + 1):
            acc -= ctx.log1p(zz / k)
        value = BigFloat(ctx.exp(acc), ctx.dps)
    rel = abs(zfloat * (zfloat + 1)) / (2 * n_terms)
    valid = int(math.floor(-math.log10(rel))) if rel > 0 else digits
    return OracleValue(value, max(0, min(valid, digits)), rel)


# ---------------------------------------------------------------------------
# Gamma ratio products
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GammaFactor:
    """``Gamma(scale * (x + offset)) ** multiplicity`` in the numerator or denominator."""

    slot: str
    offset: Expr
    scale: Fraction = Fraction(1, 2)
    multiplicity: int = 1

    def __post_init__(self):
        if self.slot not in ("num", "den"):
            raise ConfigError(f"slot must be 'num' or 'den', got {self.slot!r}")
        if self.multiplicity < 1:
            raise ConfigError("multiplicity must be positive")
        object.__setattr__(self, "offset", Expr(self.offset))
        object.__setattr__(self, "scale", as_fraction(self.scale))

    @property
    def sign(self) -> int:
        return 1 if self.slot == "num" else -1

    def to_json(self):
        return {"slot": self.slot, "offset": self.offset.source,
                "scale": f"{self.scale.numerator}/{self.scale.denominator}",
                "multiplicity": self.multiplicity}


@dataclass(frozen=True)
class GammaRatioSpec:
    """Signed multiset of gamma factors with affine arguments ``scale * (x + offset)``."""

    factors: tuple
    definitions: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        defs = self.definitions.items() if isinstance(self.definitions, dict) else self.definitions
        object.__setattr__(self, "definitions", tuple((str(k), Expr(v)) for k, v in defs))
        if len({f.scale for f in self.factors}) > 1:
            raise ConfigError("all gamma arguments must share one scale")

    @classmethod
    def build(cls, num=(), den=(), scale=Fraction(1, 2), definitions=()):
        """``num`` / ``den`` are offset expressions or ``(offset, multiplicity)`` pairs."""
        factors = []
        for slot, items in (("num", num), ("den", den)):
            for item in items:
                off, mult = (item, 1) if isinstance(item, str) else item
                factors.append(GammaFactor(slot, off, scale, mult))
        return cls(tuple(factors), definitions)

    @property
    def scale(self) -> Fraction:
        return self.factors[0].scale if self.factors else Fraction(1)

    @property
    def step(self) -> Fraction:
        """Shift of ``x`` that raises every argument by exactly one."""
        return 1 / self.scale

    def _env(self, bindings: dict) -> dict:
        env = {k: (v if isinstance(v, (Fraction, RationalFunction)) else as_fraction(v)) for k, v in bindings.items()}
        return evaluate_definitions(self.definitions, env)

    def signed_offsets(self, bindings: dict) -> list:
        """``(signed multiplicity, offset)`` pairs after cancelling equal factors."""
        env = self._env(bindings)
        tally = {}
        for f in self.factors:
            off = f.offset.evaluate(env)
            tally[off] = tally.get(off, 0) + f.sign * f.multiplicity
        return [(mult, off) for off, mult in sorted(tally.items()) if mult]

    def arguments(self, bindings: dict) -> list:
        """``(signed multiplicity, argument)`` pairs at numeric bindings including ``x``."""
        if "x" not in bindings:
            raise ConfigError("gamma arguments need a value for x")
        x = as_fraction(bindings["x"])
        return [(mult, self.scale * (x + off)) for mult, off in self.signed_offsets(bindings)]

    def asymptotic_hints(self, bindings: dict) -> tuple:
        """``(kappa0, lambda0)`` with ``f(x) ~ lambda0 * x**(-kappa0)`` as ``x -> oo``."""
        offsets = self.signed_offsets(bindings)
        kappa0 = -sum(mult * off for mult, off in offsets) * self.scale
        if sum(mult for mult, _ in offsets) != 0:
            raise ConfigError("the gamma ratio is not balanced; it has no power-law asymptotics")
        lam0 = self.scale ** (-kappa0) if kappa0.denominator == 1 else None
        return kappa0, lam0

    def shift_ratio(self, bindings: dict) -> RationalFunction:
        """``f(x) / f(x + step)`` as a rational function of ``x``.

        Each factor contributes ``Gamma(z) / Gamma(z + 1) = 1 / z``.
        """
        num = Poly((1,), "x")
        den = Poly((1,), "x")
        for mult, off in self.signed_offsets(bindings):
            z = Poly((self.scale * off, self.scale), "x")
            if mult > 0:
                den = den * z ** mult
            else:
                num = num * z ** (-mult)
        return RationalFunction(num, den)

    def to_json(self):
        out = {"factors": [f.to_json() for f in self.factors]}
        if self.definitions:
            out["definitions"] = {k: v.source for k, v in self.definitions}
        return out


def lhs_value(spec: GammaRatioSpec, bindings: dict, digits: int = 40) -> OracleValue:
    """``exp(sum +- multiplicity * ln Gamma(argument))`` at the given bindings."""
    args = spec.arguments(bindings)
    for _, z in args:
        if z <= 0:
            raise NonpositiveArgument(f"gamma argument {z} is not positive")
    ctx = MPContext()
    ctx.dps = digits + GUARD_DIGITS
    total = ctx.zero
    err = 0.0
    for mult, z in args:
        lg = log_gamma(z, digits + 5)
        total += mult * lg.value.to_mpf(ctx)
        err += abs(mult) * (lg.error_bound or 0.0)
    value = ctx.exp(total)
    # absolute log error turns into relative value error
    valid = digits if err == 0 else int(min(digits, math.floor(-math.log10(err))))
    return OracleValue(BigFloat(value, ctx.dps), valid, err)
