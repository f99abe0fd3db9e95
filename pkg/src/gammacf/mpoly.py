"""Sparse multivariate polynomials and a small triangularizing solver.

Coefficients live in any field whose elements support ``+ - * /`` and
comparison with zero: Fractions, or :class:`RationalFunction` values when a
parameter such as ``x`` stays symbolic.  The solver handles the short
bilinear systems that arise when adjoint factors are forced to be constant;
it is not a general Groebner engine.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, Tuple

from .scalar import Poly, RationalFunction

__all__ = ["MPoly", "solve_polynomial_system", "field_sqrt"]


class MPoly:
    """``{exponent tuple: coefficient}`` over ``nvars`` variables."""

    __slots__ = ("terms", "nvars")

    def __init__(self, terms: Dict[Tuple[int, ...], object], nvars: int):
        self.nvars = nvars
        self.terms = {e: c for e, c in terms.items() if not c == 0}

    @classmethod
    def const(cls, c, nvars):
        return cls({(0,) * nvars: c}, nvars)

    @classmethod
    def var(cls, i, nvars):
        e = [0] * nvars
        e[i] = 1
        return cls({tuple(e): Fraction(1)}, nvars)

    def _lift(self, other):
        return other if isinstance(other, MPoly) else MPoly.const(other, self.nvars)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out[e] + c if e in out else c
        return MPoly(out, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return MPoly({e: -c for e, c in self.terms.items()}, self.nvars)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, MPoly):
            if other == 0:
                return MPoly({}, self.nvars)
            return MPoly({e: c * other for e, c in self.terms.items()}, self.nvars)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out[e] + c1 * c2 if e in out else c1 * c2
        return MPoly(out, self.nvars)

    __rmul__ = __mul__

    def __eq__(self, other):
        other = self._lift(other)
        return (self - other).is_zero()

    def __hash__(self):
        return hash(tuple(sorted(self.terms)))

    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def variables(self) -> set:
        return {i for e in self.terms for i, k in enumerate(e) if k}

    def constant_term(self):
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def substitute(self, i: int, value: "MPoly") -> "MPoly":
        """Replace variable ``i`` by ``value``."""
        value = self._lift(value)
        powers = [MPoly.const(Fraction(1), self.nvars)]
        out = MPoly({}, self.nvars)
        for e, c in self.terms.items():
            k = e[i]
            while len(powers) <= k:
                powers.append(powers[-1] * value)
            rest = list(e)
            rest[i] = 0
            out = out + MPoly({tuple(rest): c}, self.nvars) * powers[k]
        return out

    def univariate(self, i: int) -> Poly:
        """Coefficients in variable ``i`` (requires no other variable to occur)."""
        deg = max(e[i] for e in self.terms)
        cs = [Fraction(0)] * (deg + 1)
        for e, c in self.terms.items():
            cs[e[i]] = c
        return Poly(cs, f"v{i}")

    def __repr__(self):
        return f"MPoly({self.terms!r})"


# ---------------------------------------------------------------------------
# square roots in the coefficient field
# ---------------------------------------------------------------------------


def _fraction_sqrt(q: Fraction):
    if q < 0:
        return None
    n, d = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if n * n == q.numerator and d * d == q.denominator:
        return Fraction(n, d)
    return None


def _poly_sqrt(p: Poly):
    """Square root of a polynomial with Fraction coefficients, or ``None``."""
    if p.is_zero():
        return p
    if p.degree % 2:
        return None
    lead = _fraction_sqrt(p.lc)
    if lead is None:
        return None
    half = p.degree // 2
    # determine the root's coefficients from the top down
    root = [Fraction(0)] * (half + 1)
    root[half] = lead
    for k in range(half - 1, -1, -1):
        target = p.coeff(half + k)
        acc = sum(root[i] * root[half + k - i] for i in range(k + 1, half + 1) if 0 <= half + k - i <= half)
        root[k] = (target - acc) / (2 * lead)
    s = Poly(root, p.var)
    return s if s * s == p else None


def field_sqrt(value):
    """A square root inside the coefficient field, or ``None`` if there is none."""
    if isinstance(value, RationalFunction):
        num, den = value.num, value.den
        # den is monic; a square numerator may carry a rational square factor
        rd = _poly_sqrt(den)
        rn = _poly_sqrt(num)
        if rd is None or rn is None:
            return None
        return RationalFunction(rn, rd)
    return _fraction_sqrt(Fraction(value))


def _roots_in_field(p: Poly) -> list:
    """Roots in the coefficient field: all of them up to degree 2, rational ones beyond."""
    cs = list(p.coeffs)
    roots = []
    if cs and cs[0] == 0:
        roots.append(Fraction(0))
    while cs and cs[0] == 0:
        cs.pop(0)
    q = Poly(cs, p.var)
    if q.degree <= 0:
        return roots
    if q.degree == 1:
        return roots + [-q.coeff(0) / q.coeff(1)]
    if q.degree == 2:
        a, b, c = q.coeff(2), q.coeff(1), q.coeff(0)
        disc = b * b - 4 * a * c
        s = field_sqrt(disc)
        if s is None:
            return roots
        r1 = (-b + s) / (2 * a)
        r2 = (-b - s) / (2 * a)
        roots.append(r1)
        if not r2 == r1:
            roots.append(r2)
        return roots
    if all(isinstance(c, Fraction) for c in q.coeffs):
        found = _rational_roots(q)
        if found:
            rest = q
            for r in found:
                rest, _ = rest.divmod(Poly([-r, 1], q.var))
            return roots + found + [r for r in _roots_in_field(rest) if r not in found]
    # no rational root, or coefficients in x: the branch is left unresolved
    return roots


_DIVISOR_LIMIT = 10**12


def _divisors(n: int) -> list:
    n = abs(n)
    small = [d for d in range(1, math.isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def _rational_roots(p: Poly) -> list:
    """Distinct rational roots of a polynomial with rational coefficients and nonzero constant term."""
    den = 1
    for c in p.coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in p.coeffs]
    a0, an = ints[0], ints[-1]
    if abs(a0) > _DIVISOR_LIMIT or abs(an) > _DIVISOR_LIMIT:
        return []
    out = []
    for num in _divisors(a0):
        for d in _divisors(an):
            for cand in (Fraction(num, d), Fraction(-num, d)):
                if cand not in out and p(cand) == 0:
                    out.append(cand)
    return out


# ---------------------------------------------------------------------------
# elimination
# ---------------------------------------------------------------------------


def _monomial_key(e):
    # nonlinear monomials first (higher degree first), then linear, then the constant
    return (-sum(e), tuple(-k for k in e))


def _rref(equations):
    monos = sorted({e for eq in equations for e in eq.terms}, key=_monomial_key)
    rows = [dict(eq.terms) for eq in equations]
    pivots = []
    r = 0
    for mono in monos:
        piv = next((i for i in range(r, len(rows)) if mono in rows[i] and not rows[i][mono] == 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][mono]
        rows[r] = {e: c * inv for e, c in rows[r].items()}
        for i in range(len(rows)):
            if i != r and mono in rows[i]:
                f = rows[i][mono]
                merged = dict(rows[i])
                for e, c in rows[r].items():
                    merged[e] = merged[e] - f * c if e in merged else -f * c
                rows[i] = {e: c for e, c in merged.items() if not c == 0}
        pivots.append(mono)
        r += 1
    nvars = equations[0].nvars
    return [MPoly(row, nvars) for row in rows[:r]]


def solve_polynomial_system(equations, nvars: int, max_branches: int = 256):
    """All solutions found by triangular elimination with branching.

    Returns a list of ``(assignment dict, free variable set)``.  Variables
    left unconstrained are set to zero and reported as free.
    """
    solutions = []
    stack = [(list(equations), {})]
    branches = 0
    while stack:
        eqs, assigned = stack.pop()
        branches += 1
        if branches > max_branches:
            break
        result = _solve_branch(eqs, assigned, nvars, stack)
        if result is not None:
            solutions.append(result)
    return solutions


def _apply(eqs, i, value):
    return [eq.substitute(i, value) for eq in eqs]


def _solve_branch(eqs, assigned, nvars, stack):
    while True:
        eqs = [e for e in eqs if not e.is_zero()]
        if any(e.is_constant() for e in eqs):
            return None
        if not eqs:
            free = set(range(nvars)) - set(assigned)
            zero = MPoly.const(Fraction(0), nvars)
            values = {}
            for i, expr in assigned.items():
                for j in free:
                    expr = expr.substitute(j, zero)
                if not expr.is_constant():
                    return None
                values[i] = expr.constant_term()
            for j in free:
                values[j] = Fraction(0)
            return values, free
        rows = _rref(eqs)
        progressed = False
        for row in rows:
            if row.total_degree() == 1:
                lead = min(row.terms, key=_monomial_key)
                i = lead.index(1)
                rest = row - MPoly({lead: row.terms[lead]}, nvars)
                value = -rest * (1 / row.terms[lead])
                assigned = _record(assigned, i, value, nvars)
                eqs = _apply(rows, i, value)
                progressed = True
                break
        if progressed:
            continue
        for row in rows:
            vs = row.variables()
            if len(vs) == 1:
                i = vs.pop()
                roots = _roots_in_field(row.univariate(i))
                if not roots:
                    return None
                for root in roots[1:]:
                    stack.append((_apply(rows, i, MPoly.const(root, nvars)),
                                  _record(assigned, i, MPoly.const(root, nvars), nvars)))
                value = MPoly.const(roots[0], nvars)
                assigned = _record(assigned, i, value, nvars)
                eqs = _apply(rows, i, value)
                progressed = True
                break
        if progressed:
            continue
        for row in rows:
            if len(row.terms) == 1:
                (mono,) = row.terms
                vs = [i for i, k in enumerate(mono) if k]
                zero = MPoly.const(Fraction(0), nvars)
                for i in vs[1:]:
                    stack.append((_apply(rows, i, zero), _record(assigned, i, zero, nvars)))
                assigned = _record(assigned, vs[0], zero, nvars)
                eqs = _apply(rows, vs[0], zero)
                progressed = True
                break
        if not progressed:
            return None


def _record(assigned, i, value, nvars):
    out = {}
    for j, v in assigned.items():
        out[j] = v.substitute(i, value)
    out[i] = value
    return out
