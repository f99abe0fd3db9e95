"""Bauer-Muir transformation with periodic quadratic modifying factors.

For modifying factors ``r_0, r_1, ...`` the adjoint factors are
``phi_n = a_n - r_{n-1} (b_n + r_n)``.  When none vanishes, the transformed
fraction has leading term ``b_0 + r_0``, first pair ``(phi_1, b_1 + r_1)`` and
general pairs ``a_{n-1} phi_n / phi_{n-1}`` over
``b_n + r_n - r_{n-2} phi_n / phi_{n-1}``.  Its n-th approximant equals the
modified approximant ``(A_n + r_n A_{n-1}) / (B_n + r_n B_{n-1})`` of the
input (index offset 0; see ``tests/test_bauer_muir.py`` for the brute-force
confirmation).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .cf import ContinuedFraction, FunctionCF
from .errors import AdjointZero, ConfigError, NoSolutionFound
from .expr import Expr, evaluate_definitions
from .mpoly import MPoly, solve_polynomial_system
from .scalar import Poly, as_fraction

__all__ = [
    "AdjointSequence",
    "BoundFactors",
    "ConstancyResult",
    "ModifyingFactors",
    "MODIFIED_APPROXIMANT_OFFSET",
    "adjoint_factors",
    "bauer_muir_transform",
    "double_transform_recurrence",
    "solve_modifying_factors",
    "verify_constancy",
]

# n-th approximant of the transform == modified approximant of index n + offset
MODIFIED_APPROXIMANT_OFFSET = 0


@dataclass(frozen=True)
class ModifyingFactors:
    """``r_{2m} = u1 m^2 + v1 m + w1`` and ``r_{2m-1} = u2 m^2 + v2 m + w2``.

    Coefficients are expressions over the fraction's parameters and any named
    definitions supplied at binding time.
    """

    even: tuple
    odd: tuple

    def __post_init__(self):
        if len(self.even) != 3 or len(self.odd) != 3:
            raise ConfigError("modifying factors need three coefficients per parity")
        object.__setattr__(self, "even", tuple(Expr(e) for e in self.even))
        object.__setattr__(self, "odd", tuple(Expr(e) for e in self.odd))

    @classmethod
    def from_tuple(cls, u1, u2, v1, v2, w1, w2) -> "ModifyingFactors":
        """Build from the interleaved order ``(u1, u2, v1, v2, w1, w2)``."""
        return cls((u1, v1, w1), (u2, v2, w2))

    @classmethod
    def zero(cls) -> "ModifyingFactors":
        return cls(("0", "0", "0"), ("0", "0", "0"))

    def as_tuple(self) -> tuple:
        (u1, v1, w1), (u2, v2, w2) = self.even, self.odd
        return (u1, u2, v1, v2, w1, w2)

    def bind(self, env: dict, definitions=()) -> "BoundFactors":
        env = evaluate_definitions(definitions, env)
        return BoundFactors(tuple(e.evaluate(env) for e in self.even),
                            tuple(e.evaluate(env) for e in self.odd))

    def to_json(self) -> dict:
        return {"modifying_factors": {"even": [e.source for e in self.even],
                                      "odd": [e.source for e in self.odd]}}

    @classmethod
    def from_json(cls, data: dict) -> "ModifyingFactors":
        body = data.get("modifying_factors", data)
        try:
            return cls(tuple(body["even"]), tuple(body["odd"]))
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"malformed modifying factors: {exc}") from None


@dataclass(frozen=True)
class BoundFactors:
    """Modifying factors with numeric (or rational-function) coefficients."""

    even: tuple
    odd: tuple

    @classmethod
    def from_tuple(cls, u1, u2, v1, v2, w1, w2) -> "BoundFactors":
        return cls((u1, v1, w1), (u2, v2, w2))

    def as_tuple(self) -> tuple:
        (u1, v1, w1), (u2, v2, w2) = self.even, self.odd
        return (u1, u2, v1, v2, w1, w2)

    def r(self, n: int):
        if n < 0:
            raise IndexError("modifying factors start at r_0")
        if n % 2 == 0:
            m = n // 2
            u, v, w = self.even
        else:
            m = (n + 1) // 2
            u, v, w = self.odd
        return u * m * m + v * m + w

    def __call__(self, n: int):
        return self.r(n)


def _bound(r) -> BoundFactors:
    if isinstance(r, BoundFactors):
        return r
    if callable(r):
        return _CallableFactors(r)
    raise TypeError("modifying factors must be bound before use")


class _CallableFactors(BoundFactors):
    def __init__(self, fn):
        object.__setattr__(self, "_fn", fn)
        object.__setattr__(self, "even", ())
        object.__setattr__(self, "odd", ())

    def r(self, n):
        return self._fn(n)


@dataclass(frozen=True)
class AdjointSequence:
    values: tuple
    zeros: tuple = ()

    def __len__(self):
        return len(self.values)

    def __getitem__(self, n):
        """``phi_n`` for ``n >= 1``."""
        return self.values[n - 1]


def adjoint_factors(cf: ContinuedFraction, r, N: int) -> AdjointSequence:
    """``phi_1 .. phi_N``; vanishing entries are listed in ``zeros``."""
    if N < 1:
        raise ValueError("N must be at least 1")
    r = _bound(r)
    values = []
    zeros = []
    for n in range(1, N + 1):
        a, b = cf.term(n)
        phi = a - r(n - 1) * (b + r(n))
        values.append(phi)
        if phi == 0:
            zeros.append(n)
    return AdjointSequence(tuple(values), tuple(zeros))


@dataclass(frozen=True)
class ConstancyResult:
    is_constant_by_parity: bool
    phi_even: object
    phi_odd: object
    ratio_alternates: bool

    def __bool__(self):
        return self.is_constant_by_parity and self.ratio_alternates


def verify_constancy(seq: AdjointSequence) -> ConstancyResult:
    """Exact parity-constancy and ``phi_{n+1} / phi_n = -1`` tests."""
    if not seq.values:
        raise ValueError("empty adjoint sequence")
    vals = seq.values
    odd = vals[0::2]   # phi_1, phi_3, ...
    even = vals[1::2]  # phi_2, phi_4, ...
    odd_const = all(v == odd[0] for v in odd)
    even_const = all(v == even[0] for v in even) if even else True
    alternates = all(not vals[k] == 0 and vals[k + 1] == -vals[k] for k in range(len(vals) - 1))
    return ConstancyResult(
        odd_const and even_const,
        even[0] if even and even_const else None,
        odd[0] if odd_const else None,
        alternates,
    )


def bauer_muir_transform(cf: ContinuedFraction, r, depth: Optional[int] = None) -> ContinuedFraction:
    """Lazily generated transformed fraction.

    With ``depth`` given, adjoint factors ``phi_1 .. phi_depth`` are checked
    up front; otherwise a vanishing factor raises when its term is requested.
    """
    r = _bound(r)
    cache = {}

    def phi(n):
        hit = cache.get(n)
        if hit is None:
            a, b = cf.term(n)
            hit = a - r(n - 1) * (b + r(n))
            if hit == 0:
                raise AdjointZero(n)
            cache[n] = hit
        return hit

    if depth is not None:
        for n in range(1, depth + 1):
            phi(n)

    def fn(n):
        if n == 1:
            _, b1 = cf.term(1)
            return (phi(1), b1 + r(1))
        a_prev, _ = cf.term(n - 1)
        _, b = cf.term(n)
        q = phi(n) / phi(n - 1)
        return (a_prev * q, b + r(n) - r(n - 2) * q)

    out_depth = cf.depth
    return FunctionCF(cf.b0 + r(0), fn, out_depth, label="Bauer-Muir")


# ---------------------------------------------------------------------------
# solving for constant adjoint factors
# ---------------------------------------------------------------------------

_U1, _U2, _V1, _V2, _W1, _W2 = range(6)


def _interpolate(points, max_degree):
    """Polynomial through ``(m, value)`` samples; ``None`` if the data is not polynomial of that degree."""
    xs = [Fraction(m) for m, _ in points]
    ys = [v for _, v in points]
    n = max_degree + 1
    # Newton divided differences on the first n points
    coef = list(ys[:n])
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly = Poly((coef[-1],), "m")
    for i in range(n - 2, -1, -1):
        poly = poly * Poly((-xs[i], 1), "m") + Poly((coef[i],), "m")
    for m, v in points[n:]:
        if not poly(Fraction(m)) == v:
            return None
    return poly


def _parity_polys(cf: ContinuedFraction, max_degree: int = 3):
    """``a`` and ``b`` of even and odd terms as polynomials in the block index."""
    count = max_degree + 4
    out = {}
    for label, index in (("e", lambda m: 2 * m), ("o", lambda m: 2 * m - 1)):
        samples_a = [(m, cf.term(index(m))[0]) for m in range(1, count + 1)]
        samples_b = [(m, cf.term(index(m))[1]) for m in range(1, count + 1)]
        pa = _interpolate(samples_a, max_degree)
        pb = _interpolate(samples_b, max_degree)
        if pa is None or pb is None:
            raise ConfigError("partial pairs are not polynomial in the block index")
        out["a" + label], out["b" + label] = pa, pb
    return out


def _lift_poly(p: Poly, nvars=6) -> Poly:
    return Poly([MPoly.const(c, nvars) for c in p.coeffs], "m")


def adjoint_equations(cf: ContinuedFraction) -> list:
    """The eight equations ``[m^k] phi_{2m} = [m^k] phi_{2m-1} = 0`` for ``k = 1..4``."""
    polys = _parity_polys(cf)
    V = [MPoly.var(i, 6) for i in range(6)]
    R_e = Poly([V[_W1], V[_V1], V[_U1]], "m")
    R_o = Poly([V[_W2], V[_V2], V[_U2]], "m")
    # r_{2m-2} is the even quadratic at m - 1
    R_e_prev = Poly([V[_W1] - V[_V1] + V[_U1], V[_V1] - 2 * V[_U1], V[_U1]], "m")
    a_e, b_e = _lift_poly(polys["ae"]), _lift_poly(polys["be"])
    a_o, b_o = _lift_poly(polys["ao"]), _lift_poly(polys["bo"])
    phi_e = a_e - R_o * (b_e + R_e)
    phi_o = a_o - R_e_prev * (b_o + R_o)
    eqs = []
    for phi in (phi_e, phi_o):
        for k in range(1, max(phi.degree, 4) + 1):
            c = phi.coeff(k)
            if isinstance(c, MPoly) and not c.is_zero():
                eqs.append(c)
            elif not isinstance(c, MPoly) and not c == 0:
                eqs.append(MPoly.const(c, 6))
    return eqs


def solve_modifying_factors(cf: ContinuedFraction, check_terms: int = 24) -> list:
    """All periodic quadratic modifying factors making ``phi`` parity-constant.

    ``cf`` must have period-2 (or period-1) partial pairs that are
    polynomials of degree at most 3 in the block index; coefficients may be
    rational functions of a symbolic ``x``.  Unconstrained coefficients are
    set to zero.  Every candidate is re-checked with :func:`verify_constancy`;
    candidates with a zero adjoint factor are dropped.
    """
    eqs = adjoint_equations(cf)
    raw = solve_polynomial_system(eqs, 6)
    found = []
    for values, _free in raw:
        tup = tuple(values[i] for i in (_U1, _U2, _V1, _V2, _W1, _W2))
        bound = BoundFactors.from_tuple(*tup)
        try:
            seq = adjoint_factors(cf, bound, check_terms)
        except ZeroDivisionError:
            continue
        # a vanishing adjoint factor means the transform does not exist
        if seq.zeros:
            continue
        result = verify_constancy(seq)
        if not result.is_constant_by_parity:
            continue
        if any(all(a == b for a, b in zip(tup, f.as_tuple())) for f in found):
            continue
        found.append(bound)
    if not found:
        raise NoSolutionFound("no periodic quadratic modifying factors make the adjoint factors constant")
    return found


# ---------------------------------------------------------------------------
# recurrence check
# ---------------------------------------------------------------------------


def double_transform_recurrence(fixture, bindings: dict, digits: int = 40, tol=None) -> dict:
    """Compare ``F(x) / F(x + step)`` against the fixture's rational ratio.

    ``fixture.recurrence`` supplies the fraction for ``F``, the step, the
    ratio expression and an optional map applied to ``F`` before the ratio
    is taken (the theorem5 fixture uses ``Q = (F - sigma) / (F + sigma)``).
    """
    from .cf import bind_cf, evaluate
    from .scalar import BigFloat

    rec = fixture.recurrence
    if tol is None:
        tol = Fraction(1, 10 ** (digits + 2))
    x = as_fraction(bindings["x"])
    values = []
    terms = 0
    for shift in (0, rec.step):
        env = dict(bindings)
        env["x"] = x + shift
        rep = evaluate(bind_cf(rec.cf, env), tol, digits=digits + 5)
        terms += rep.terms_used
        v = rep.value
        if rec.transform is not None:
            v = rec.transform(v, env)
        values.append(v)
    lhs = values[0] / values[1]
    env = evaluate_definitions(rec.definitions, {k: as_fraction(v) for k, v in bindings.items()})
    rhs_exact = rec.ratio.evaluate(env)
    rhs = BigFloat(rhs_exact, lhs.digits)
    return {"lhs_ratio": lhs, "rhs_ratio": rhs_exact, "residual": abs(lhs - rhs), "terms_used": terms}
