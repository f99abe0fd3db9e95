"""Asymptotic closing of truncated continued fractions.

For a fraction whose partial pairs are rational in the index with period 1
or 2, write ``g_n = a_n / (b_{n-1} b_n)``.  When ``g_n ~ G n**2`` with
``G > 0`` in every residue, the normalized tails ``u_n = t_n / b_n`` admit an
expansion ``u_n = n * sum_k c_{r,k} n**(-k)`` that depends on the residue
``r = n mod 2``.  The coefficients follow order by order from

    u_n (1 + u_{n+1}) = g_{n+1},

so ``(A_n + t_n A_{n-1}) / (B_n + t_n B_{n-1})`` converges far faster than
the plain approximant ``A_n / B_n``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from mpmath import MPContext

from .scalar import RationalFunction

__all__ = ["TailModel", "normalized_ratio", "tail_coefficients"]

DEFAULT_ORDER = 24


def _rule_index_rf(rf: RationalFunction, period: int, residue: int) -> RationalFunction:
    """Re-express a block-index rational function in the rule index ``n``."""
    shift = 0 if residue == 0 else period - residue
    # n = P m - shift  =>  m = (n + shift) / P
    return rf.compose_affine(Fraction(1, period), Fraction(shift, period))


def normalized_ratio(rfs, period: int) -> list:
    """``g_n = a_n / (b_{n-1} b_n)`` as rational functions of ``n``, per residue of ``n mod 2``."""
    a = [_rule_index_rf(rfs[r][0], period, r) for r in range(period)]
    b = [_rule_index_rf(rfs[r][1], period, r) for r in range(period)]
    if period == 1:
        a, b = a * 2, b * 2
    out = []
    for r in range(2):
        prev_b = b[1 - r].shift(-1)
        if b[r].is_zero() or prev_b.is_zero():
            return None
        out.append(a[r] / (prev_b * b[r]))
    return out


def _series_at_infinity(rf: RationalFunction, lead: int, count: int) -> list:
    """Coefficients of ``rf(n) / n**lead`` in powers of ``1/n``."""
    num, den = rf.num, rf.den
    dn, dd = num.degree, den.degree
    N = [num.coeff(dn - i) for i in range(count)]
    D = [den.coeff(dd - i) for i in range(count)]
    out = []
    for k in range(count):
        s = N[k] - sum(out[i] * D[k - i] for i in range(k))
        out.append(s / D[0])
    return out


def growth_constant(g) -> Fraction | None:
    """``G`` when every residue has ``g_n ~ G n**2`` with a common ``G > 0``."""
    if g is None:
        return None
    leads = set()
    for rf in g:
        if rf.num.degree - rf.den.degree != 2:
            return None
        leads.add(rf.num.lc / rf.den.lc)
    if len(leads) != 1:
        return None
    G = leads.pop()
    return G if G > 0 else None


def tail_coefficients(g, order: int, ctx) -> list:
    """Solve for ``c[r][k]``, ``k < order``, in the precision of ``ctx``."""
    L = order + 2
    S = []
    for r in range(2):
        shifted = g[r].shift(1)
        S.append([ctx.mpf(c.numerator) / c.denominator for c in _series_at_infinity(shifted, 2, order + 3)])
    binom_cache = {}

    def one_plus_z_power(e):
        # series of (1 + z)**e up to z**L
        hit = binom_cache.get(e)
        if hit is None:
            hit = [ctx.one]
            for i in range(L - 1):
                hit.append(hit[-1] * (e - i) / (i + 1))
            binom_cache[e] = hit
        return hit

    def residual(c):
        # R_r(z) = V_r W_{r'} + z V_r - S_{r'} with W(z) = sum c_k z**k (1+z)**(1-k)
        out = []
        for r in range(2):
            rp = 1 - r
            W = [ctx.zero] * L
            for k, ck in enumerate(c[rp]):
                coef = one_plus_z_power(1 - k)
                for i in range(L - k):
                    W[k + i] += ck * coef[i]
            V = c[r] + [ctx.zero] * (L - len(c[r]))
            R = [ctx.zero] * L
            for i in range(L):
                if V[i]:
                    for j in range(L - i):
                        R[i + j] += V[i] * W[j]
            for i in range(L - 1):
                R[i + 1] += V[i]
            for i in range(L):
                R[i] -= S[rp][i]
            out.append(R)
        return out

    G = S[0][0]

    def leading_mismatch(s):
        R = residual([[s], [G / s]])
        return R[0][1] - R[1][1]

    # s * mismatch(s) is quadratic in s; recover it from three samples
    samples = [(ctx.mpf(k), ctx.mpf(k) * leading_mismatch(ctx.mpf(k))) for k in (1, 2, 3)]
    A = ctx.matrix([[s ** 2, s, 1] for s, _ in samples])
    qa, qb, qc = ctx.lu_solve(A, ctx.matrix([v for _, v in samples]))
    if qa == 0:
        s = -qc / qb
    else:
        disc = ctx.sqrt(qb ** 2 - 4 * qa * qc)
        s = max((-qb + disc) / (2 * qa), (-qb - disc) / (2 * qa))
    c = [[s], [G / s]]
    for j in range(1, order):
        def probe(v0, v1):
            R = residual([c[0] + [v0], c[1] + [v1]])
            return ctx.matrix([R[0][j], R[0][j + 1] - R[1][j + 1]])

        f0 = probe(ctx.zero, ctx.zero)
        M = ctx.matrix(2, 2)
        M[:, 0] = probe(ctx.one, ctx.zero) - f0
        M[:, 1] = probe(ctx.zero, ctx.one) - f0
        sol = ctx.lu_solve(M, -f0)
        c[0].append(sol[0])
        c[1].append(sol[1])
    return c


@dataclass
class TailModel:
    head: int
    coeffs: list
    ctx: object

    @classmethod
    def build(cls, rule, ctx, order: int = DEFAULT_ORDER):
        """Model for a :class:`~gammacf.cf.TailRule`, or ``None`` when it does not apply."""
        if rule.period > 2:
            return None
        g = normalized_ratio(rule.rfs, rule.period)
        if growth_constant(g) is None:
            return None
        work = MPContext()
        work.dps = ctx.dps + 3 * order + 20
        raw = tail_coefficients(g, order, work)
        coeffs = [[ctx.make_mpf(v._mpf_) for v in row] for row in raw]
        return cls(rule.head, coeffs, ctx)

    def normalized_tail(self, n_rule: int):
        """``u_n`` at rule index ``n_rule``, summed in pairs while the pairs shrink."""
        ctx = self.ctx
        z = ctx.one / n_rule
        terms = []
        zk = ctx.mpf(n_rule)
        for ck in self.coeffs[n_rule % 2]:
            terms.append(ck * zk)
            zk *= z
        u = terms[0] + terms[1]
        prev = abs(terms[0]) + abs(terms[1])
        for i in range(2, len(terms) - 1, 2):
            block = abs(terms[i]) + abs(terms[i + 1])
            if block > prev:
                break
            u += terms[i] + terms[i + 1]
            prev = block
        return u

    def tail(self, n: int, b_n):
        """Approximate tail ``t_n`` after the partial pair ``n`` (absolute index)."""
        from .cf import to_mp

        return to_mp(self.ctx, b_n) * self.normalized_tail(n - self.head)
