"""Multiple-correction discovery of continued fraction approximations.

For a target ``f`` known through its shift ratio ``f(x) / f(x + h)`` (a
rational function of ``x``), the k-th correction is the finite fraction

    MC_k(x) = lambda_0 / (Phi_0(x) + lambda_1 / (Phi_1(x) + ... + lambda_k / Phi_k(x)))

with monic polynomials ``Phi_j`` of degree ``kappa_j``.  Writing
``f = MC_k exp(E_k)``, the decay of ``f - MC_k`` is read off the exact
series of ``E_k(x) - E_k(x + h) = ln(f(x)/f(x+h)) + ln(MC_k(x+h)/MC_k(x))``:
if that series starts at ``x**(-nu)`` then ``f - MC_k`` decays like
``x**(-(kappa_0 - 1 + nu))``.

Each new correction picks the smallest degree whose ``lambda`` can cancel
the current leading residual coefficient, then fixes ``lambda`` and the
polynomial coefficients (highest first) one residual order at a time.
Every unknown enters its order affinely, so each step is a single exact
linear solve.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .cf import CFSpec, CoefficientRule, ContinuedFraction, Template, block_index, prepend, shift_b0
from .errors import NoExactFit, PoleAtMinusOne, SearchExhausted
from .gamma import GammaRatioSpec
from .scalar import Poly, RationalFunction, as_fraction, format_fraction
from .series import Series1OverX, series_from_rational, series_log

__all__ = [
    "CorrectionTerm",
    "FittedSequence",
    "MCExpansion",
    "ShiftRatioTarget",
    "Discovery",
    "discover",
    "discover_rule",
    "expansion_to_spec",
    "fit_coefficient_rule",
    "rf_expression",
    "rf_template",
    "fold_expansion",
    "moebius_wrap",
    "next_correction",
    "residual_series",
    "to_theorem_form",
]

DEFAULT_KAPPA_BOUND = 4
MAX_ORDER = 400


# ---------------------------------------------------------------------------
# data types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ShiftRatioTarget:
    """``ratio = f(x) / f(x + step)`` with optional asymptotic hints.

    ``kappa0`` and ``lambda0`` describe ``f(x) ~ lambda0 * x**(-kappa0)``.
    """

    ratio: RationalFunction
    step: Fraction = Fraction(1)
    kappa0: Optional[int] = None
    lambda0: Optional[Fraction] = None
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "step", as_fraction(self.step))
        if self.ratio.var != "x":
            raise ValueError("the shift ratio must be a rational function of x")
        lead = self.ratio.num.lc / self.ratio.den.lc
        if self.ratio.num.degree != self.ratio.den.degree or lead != 1:
            raise ValueError("the shift ratio must tend to 1 as x grows")

    @classmethod
    def from_gamma(cls, spec: GammaRatioSpec, bindings: dict, label: str = "") -> "ShiftRatioTarget":
        kappa0, lambda0 = spec.asymptotic_hints(bindings)
        if kappa0.denominator != 1 or lambda0 is None:
            raise ValueError(f"leading order {kappa0} is not an integer")
        return cls(spec.shift_ratio(bindings), spec.step, int(kappa0), lambda0, label)

    def hints(self) -> tuple:
        """``(kappa0, lambda0)``, inferred from the ratio when not given."""
        kappa0 = self.kappa0
        if kappa0 is None:
            s = series_log(series_from_rational(self.ratio, 2))
            # ln f(x)/f(x+h) ~ kappa0 h / x
            k = s.coeff(1) / self.step
            if k.denominator != 1 or k <= 0:
                raise ValueError(f"target decays like x^-{k}; need a positive integer order")
            kappa0 = int(k)
        return kappa0, (self.lambda0 if self.lambda0 is not None else Fraction(1))


@dataclass(frozen=True)
class CorrectionTerm:
    """``lambda / Phi(x)`` with ``Phi`` monic of degree ``kappa``."""

    lam: Fraction
    phi: Poly
    tie_flag: bool = False

    def __post_init__(self):
        if self.lam == 0:
            raise ValueError("a correction needs a nonzero lambda")
        if self.phi.is_zero() or self.phi.lc != 1:
            raise ValueError("Phi must be monic")

    @property
    def kappa(self) -> int:
        return self.phi.degree


@dataclass(frozen=True)
class MCExpansion:
    """Accepted corrections and the decay order of ``f - MC_k`` after each."""

    terms: tuple = ()
    rates: tuple = ()
    step: Fraction = Fraction(1)
    notes: tuple = ()

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.rates, self.rates[1:])):
            raise ValueError("rates must strictly increase")

    @property
    def depth(self) -> int:
        return len(self.terms) - 1

    @property
    def rate(self):
        return self.rates[-1] if self.rates else None

    @property
    def exact(self) -> bool:
        """True when the last correction matches the target's shift ratio exactly."""
        return bool(self.rates) and self.rates[-1] == math.inf

    def extend(self, term: CorrectionTerm, rate: int, note: str = "") -> "MCExpansion":
        notes = self.notes + ((note,) if note else ())
        return MCExpansion(self.terms + (term,), self.rates + (rate,), self.step, notes)


# ---------------------------------------------------------------------------
# folding and residuals
# ---------------------------------------------------------------------------


def _x_rf(p: Poly) -> RationalFunction:
    return RationalFunction(p.with_var("x"), Poly((1,), "x"))


def fold_expansion(terms) -> RationalFunction:
    """Fold ``lambda_0 / (Phi_0 + lambda_1 / (Phi_1 + ...))`` bottom-up into one rational function."""
    terms = list(terms)
    if not terms:
        raise ValueError("nothing to fold")
    tail = _x_rf(terms[-1].phi if isinstance(terms[-1], CorrectionTerm) else terms[-1][1])
    pairs = [(t.lam, t.phi) if isinstance(t, CorrectionTerm) else t for t in terms]
    for k in range(len(pairs) - 1, 0, -1):
        lam_k = pairs[k][0]
        tail = _x_rf(pairs[k - 1][1]) + RationalFunction.constant(lam_k, "x") / tail
    return RationalFunction.constant(pairs[0][0], "x") / tail


def _residual(target: ShiftRatioTarget, pairs, order: int) -> Series1OverX:
    if pairs:
        mc = fold_expansion(pairs)
        ratio = target.ratio * mc.shift(target.step) / mc
    else:
        ratio = target.ratio
    return series_log(series_from_rational(ratio, order))


def residual_series(target: ShiftRatioTarget, partial: MCExpansion, T: int) -> Series1OverX:
    """Exact series of ``ln(f(x)/f(x+h)) + ln(MC_k(x+h)/MC_k(x))`` through ``x**(-T)``."""
    pairs = [(t.lam, t.phi) for t in partial.terms]
    return _residual(target, pairs, T)


def _leading(s: Series1OverX) -> Optional[int]:
    return None if s.is_zero() else s.j0


def _rate(kappa0: int, residual: Series1OverX) -> Optional[int]:
    lead = _leading(residual)
    return None if lead is None else kappa0 - 1 + lead


# ---------------------------------------------------------------------------
# one correction
# ---------------------------------------------------------------------------


class _Search:
    """Residual evaluations with automatic growth of the truncation order."""

    def __init__(self, target: ShiftRatioTarget, order: int):
        self.target = target
        self.order = order

    def residual(self, pairs) -> Series1OverX:
        while True:
            s = _residual(self.target, pairs, self.order)
            if not s.is_zero() or self.order >= MAX_ORDER:
                return s
            self.order = min(MAX_ORDER, 2 * self.order)

    def needs(self, index: int):
        if index + 4 > self.order:
            self.order = min(MAX_ORDER, max(2 * self.order, index + 8))


def _entry_order(search: _Search, build, lead: int):
    """Order at which an unknown first changes the residual, and the residual at 0, 1, 2."""
    r0, r1 = search.residual(build(Fraction(0))), search.residual(build(Fraction(1)))
    diff = r1 - r0
    if diff.is_zero():
        return None, r0, r1
    return diff.j0, r0, r1


def _solve_affine(search: _Search, build, index: int, r0, r1):
    """Value of the unknown that cancels coefficient ``index``; ``None`` if not affine."""
    r2 = search.residual(build(Fraction(2)))
    c0, c1, c2 = r0.coeff(index), r1.coeff(index), r2.coeff(index)
    slope = c1 - c0
    if slope == 0 or c2 - c1 != slope:
        return None
    return -c0 / slope


def _try_degree(search: _Search, pairs: list, kappa: int, lead: int, first: bool):
    """Fit ``(lambda, Phi)`` of degree ``kappa``; ``None`` if lambda cannot cancel ``lead``."""
    tie = False
    coeffs = [Fraction(0)] * kappa + [Fraction(1)]

    def with_term(lam, cs):
        return pairs + [(lam, Poly(cs, "x"))]

    if first:
        lam = pairs[0][0] if pairs else None
        base = []
    else:
        base = pairs

        def build_lam(v):
            return with_term(v, coeffs)

        e, r0, r1 = _entry_order(search, build_lam, lead)
        if e is None or e != lead:
            return None
        lam = _solve_affine(search, build_lam, lead, r0, r1)
        if lam is None or lam == 0:
            return None

    for i in range(kappa - 1, -1, -1):
        def build_c(v, i=i):
            cs = list(coeffs)
            cs[i] = v
            if first:
                return [(lam, Poly(cs, "x"))]
            return with_term(lam, cs)

        current = search.residual(build_c(coeffs[i]))
        cur_lead = _leading(current)
        if cur_lead is None:
            break
        search.needs(cur_lead + 1)
        e, r0, r1 = _entry_order(search, build_c, cur_lead)
        if e is None or e > cur_lead:
            # this coefficient cannot reach the leading order: any value ties
            tie = True
            coeffs[i] = Fraction(0)
            continue
        if e < cur_lead:
            coeffs[i] = Fraction(0)
            continue
        v = _solve_affine(search, build_c, cur_lead, r0, r1)
        if v is None:
            raise SearchExhausted(kappa, f"coefficient of x^{i} enters nonlinearly")
        coeffs[i] = v
    term = CorrectionTerm(lam, Poly(coeffs, "x"), tie)
    final = search.residual(base + [(term.lam, term.phi)])
    return term, final


def next_correction(target: ShiftRatioTarget, partial: MCExpansion, kappa_bound: int = DEFAULT_KAPPA_BOUND,
                    order: Optional[int] = None):
    """The next correction term and its residual series.

    Raises :class:`SearchExhausted` when the residual already vanishes or no
    degree up to ``kappa_bound`` improves the rate.
    """
    kappa0, lambda0 = target.hints()
    pairs = [(t.lam, t.phi) for t in partial.terms]
    search = _Search(target, order or (8 * (len(pairs) + 1) + 8))
    if not pairs:
        found = _try_degree(search, [(lambda0, None)], kappa0, 0, first=True)
        return found
    current = search.residual(pairs)
    lead = _leading(current)
    if lead is None:
        raise SearchExhausted(kappa_bound, "the residual vanishes: the target is already represented exactly")
    for kappa in range(1, kappa_bound + 1):
        search.needs(lead + kappa + 2)
        found = _try_degree(search, pairs, kappa, lead, first=False)
        if found is None:
            continue
        term, residual = found
        new_lead = _leading(residual)
        if new_lead is None or new_lead > lead:
            return term, residual
    raise SearchExhausted(kappa_bound, f"no degree up to {kappa_bound} improves on x^-{lead}")


def discover(target: ShiftRatioTarget, K: int, T: Optional[int] = None,
             kappa_bound: int = DEFAULT_KAPPA_BOUND, start: Optional[MCExpansion] = None) -> MCExpansion:
    """``MC_0 .. MC_K`` with strictly increasing decay orders.

    ``start`` resumes from an expansion computed earlier for the same target.
    """
    if K < 0:
        raise ValueError("depth must be non-negative")
    kappa0, _ = target.hints()
    expansion = start if start is not None else MCExpansion(step=target.step)
    for k in range(len(expansion.terms), K + 1):
        term, residual = next_correction(target, expansion, kappa_bound, order=T)
        rate = _rate(kappa0, residual)
        if rate is None:
            rate = math.inf
            note = f"correction {k} reproduces the target exactly through x^-{residual.order}"
        else:
            note = f"correction {k}: tie-broken coefficient set to 0" if term.tie_flag else ""
        expansion = expansion.extend(term, rate, note)
        if residual.is_zero():
            break
    return expansion


# ---------------------------------------------------------------------------
# closed-form fitting
# ---------------------------------------------------------------------------


def _solve_linear(rows, rhs):
    """Exact least-structure solve; ``None`` if inconsistent.  Free unknowns are set to 0."""
    n = len(rows[0]) if rows else 0
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(aug)) if aug[i][c] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [v * inv for v in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    if any(all(v == 0 for v in row[:-1]) and row[-1] != 0 for row in aug[r:]):
        return None
    sol = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        sol[c] = aug[i][-1]
    return sol


def _fit_residue(samples, max_degree):
    """Minimal total degree ``N/D`` with monic ``D`` through all ``(m, v)`` samples."""
    for total in range(0, 2 * max_degree + 1):
        for dd in range(0, min(total, max_degree) + 1):
            dn = total - dd
            if dn > max_degree:
                continue
            rows, rhs = [], []
            for m, v in samples:
                # N(m) - v * (D(m) - m^dd) = v * m^dd
                rows.append([m ** i for i in range(dn + 1)] + [-v * m ** i for i in range(dd)])
                rhs.append(v * m ** dd)
            sol = _solve_linear(rows, rhs)
            if sol is None:
                continue
            num = Poly(sol[: dn + 1], "m")
            den = Poly(sol[dn + 1:] + [Fraction(1)], "m")
            if any(den(m) == 0 for m, _ in samples):
                continue
            if all(num(m) / den(m) == v for m, v in samples):
                return RationalFunction(num, den)
    return None


@dataclass(frozen=True)
class FittedSequence:
    """Per-residue rational functions of the block index reproducing a sequence."""

    period: int
    rfs: tuple

    def __call__(self, m: int):
        residue, block = _split(m, self.period)
        return self.rfs[residue](Fraction(block))

    def templates(self) -> tuple:
        return tuple(rf_template(rf) for rf in self.rfs)

    def rule(self, b_templates) -> CoefficientRule:
        """A coefficient rule with these values as partial numerators."""
        return CoefficientRule(self.period, tuple(zip(self.templates(), b_templates)))


def _split(m: int, period: int):
    if m == 0:
        return 0, 0
    return block_index(m, period)


def rf_template(rf: RationalFunction) -> Template:
    return Template(num_coeffs=tuple(format_fraction(c) for c in rf.num.coeffs) or ("0",),
                    den_coeffs=tuple(format_fraction(c) for c in rf.den.coeffs))


def rf_expression(rf: RationalFunction, var: str = "m") -> str:
    """Expression-grammar text for a rational function of ``var``."""

    def poly_text(p: Poly) -> str:
        parts = []
        for k, c in enumerate(p.coeffs):
            if c == 0:
                continue
            mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            coef = f"({format_fraction(c)})"
            parts.append(coef if not mono else f"{coef}*{mono}")
        return "+".join(parts) if parts else "0"

    num = poly_text(rf.num)
    if rf.den.degree == 0 and rf.den.coeff(0) == 1:
        return f"({num})"
    return f"({num})/({poly_text(rf.den)})"


def fit_coefficient_rule(values: dict, max_degree: int, period: int = 1) -> FittedSequence:
    """Exact per-residue rational fit of ``m -> value``.

    Each residue class needs at least ``2 * (max_degree + 1)`` samples so the
    fit is checked on more points than it has unknowns.
    """
    if period < 1 or max_degree < 0:
        raise ValueError("period must be positive and max_degree non-negative")
    groups = [[] for _ in range(period)]
    for m, v in sorted(values.items()):
        residue, block = _split(int(m), period)
        groups[residue].append((Fraction(block), as_fraction(v)))
    need = 2 * (max_degree + 1)
    for residue, g in enumerate(groups):
        if len(g) < need:
            raise ValueError(f"residue {residue} has {len(g)} samples; at least {need} are needed")
    rfs = []
    for residue, g in enumerate(groups):
        rf = _fit_residue(g, max_degree)
        if rf is None:
            raise NoExactFit(f"no rational function of degree <= {max_degree} fits residue {residue}")
        rfs.append(rf)
    return FittedSequence(period, tuple(rfs))


# ---------------------------------------------------------------------------
# presentation
# ---------------------------------------------------------------------------


def to_theorem_form(expansion: MCExpansion):
    """``(b0, [(a_1, b_1), ...])`` with the step factor divided out of the first two numerators.

    ``lambda_0 / (Phi_0 + lambda_1 / (Phi_1 + ...))`` is rewritten as
    ``(lambda_0/h) / (Phi_0/h + (lambda_1/h) / (Phi_1 + ...))``, which for the
    half-argument families is the form with leading denominator ``Phi_0 / 2``.
    """
    h = expansion.step
    pairs = []
    for j, t in enumerate(expansion.terms):
        lam = t.lam / h if j <= 1 else t.lam
        phi = t.phi.scale(1 / h) if j == 0 else t.phi
        pairs.append((lam, phi))
    return Fraction(0), pairs


def expansion_to_spec(expansion: MCExpansion) -> CFSpec:
    """The finite fraction ``MC_k`` in theorem form as a CF spec (explicit head terms)."""
    _, pairs = to_theorem_form(expansion)
    head = tuple((format_fraction(lam), rf_expression(RationalFunction(phi, Poly((1,), "x")), "x"))
                 for lam, phi in pairs)
    # an inert rule after the head keeps the format uniform; finite use relies on the head only
    return CFSpec(("x",), "0", CoefficientRule(1, (("0", "1"),)), head)


def moebius_wrap(value_or_cf):
    """``P -> (1 - P) / (1 + P)``; the map is its own inverse.

    For a number the value is returned.  For a fraction ``P = b0 + K(a/b)``
    the result is the fraction ``-1 + 2 / ((1 + b0) + K(a/b))``.
    """
    if isinstance(value_or_cf, ContinuedFraction):
        return prepend(shift_b0(value_or_cf, 1), Fraction(2), b0=Fraction(-1))
    P = value_or_cf
    if 1 + P == 0:
        raise PoleAtMinusOne("(1 - P) / (1 + P) has a pole at P = -1")
    return (1 - P) / (1 + P)


@dataclass(frozen=True)
class Discovery:
    """A discovered expansion and, when the coefficients follow a pattern, a full spec."""

    expansion: MCExpansion
    spec: CFSpec
    fitted: bool
    period: Optional[int] = None
    max_degree: Optional[int] = None
    notes: tuple = ()


def _sequences(pairs, head_len: int):
    """Numerators and Phi coefficients after the head, keyed by rule index ``n >= 1``."""
    body = pairs[head_len:]
    kappas = {phi.degree for _, phi in body}
    if len(kappas) != 1:
        return None
    kappa = kappas.pop()
    lams = {n: lam for n, (lam, _) in enumerate(body, start=1)}
    coeffs = [{n: phi.coeff(i) for n, (_, phi) in enumerate(body, start=1)} for i in range(kappa)]
    return kappa, lams, coeffs


def _b_template(kappa, fitted_c, residue) -> str:
    parts = [f"x^{kappa}" if kappa > 1 else "x"]
    for i, fc in enumerate(fitted_c):
        rf = fc.rfs[residue]
        if rf.is_zero():
            continue
        text = rf_expression(rf)
        parts.append(text if i == 0 else f"{text}*x^{i}" if i > 1 else f"{text}*x")
    return "+".join(parts)


def _try_fit(seqs, degree, period, fit_on):
    kappa, lams, coeffs = seqs
    try:
        f_lam = fit_coefficient_rule({n: v for n, v in lams.items() if n <= fit_on}, degree, period)
        f_c = [fit_coefficient_rule({n: v for n, v in c.items() if n <= fit_on}, degree, period)
               for c in coeffs]
    except (NoExactFit, ValueError):
        return None
    if any(f_lam(n) != v for n, v in lams.items()):
        return None
    if any(fc(n) != v for fc, c in zip(f_c, coeffs) for n, v in c.items()):
        return None
    return f_lam, f_c


def discover_rule(target: ShiftRatioTarget, depth: int, max_degree: int = 6, periods=(1, 2),
                  head_lengths=(1, 2), kappa_bound: int = DEFAULT_KAPPA_BOUND,
                  order: Optional[int] = None) -> Discovery:
    """Discover ``MC_0 .. MC_depth`` and try to extend it to a closed-form rule.

    Candidate fits are tried in order of the number of coefficients they
    need.  Each fit uses ``2 (degree + 1)`` samples per residue and must also
    reproduce one further block of coefficients, so the expansion is grown
    past ``depth`` when needed.  The returned expansion keeps every computed
    correction.
    """
    notes = []
    expansion = discover(target, depth, order, kappa_bound)
    if expansion.exact:
        notes.append(f"MC_{expansion.depth} represents the target exactly")
        return Discovery(expansion, expansion_to_spec(expansion), False, notes=tuple(notes))
    candidates = sorted(
        (2 * (d + 1) * p + p + h, h, p, d)
        for d in range(max_degree + 1) for p in periods for h in head_lengths)
    for need, head_len, period, degree in candidates:
        if expansion.depth < need:
            try:
                expansion = discover(target, need, order, kappa_bound, start=expansion)
            except SearchExhausted as exc:
                notes.append(f"expansion stopped after {expansion.depth} corrections: {exc}")
                break
        _, pairs = to_theorem_form(expansion)
        seqs = _sequences(pairs, head_len)
        if seqs is None:
            continue
        fit = _try_fit(seqs, degree, period, 2 * (degree + 1) * period)
        if fit is None:
            continue
        f_lam, f_c = fit
        kappa = seqs[0]
        b_templates = [_b_template(kappa, f_c, r) for r in range(period)]
        head = tuple((format_fraction(lam), rf_expression(RationalFunction(phi, Poly((1,), "x")), "x"))
                     for lam, phi in pairs[:head_len])
        spec = CFSpec(("x",), "0", f_lam.rule(b_templates), head)
        notes.append(f"rule fitted with period {period}, degree <= {degree}, {head_len} head term(s), "
                     f"checked on {expansion.depth} corrections")
        return Discovery(expansion, spec, True, period, degree, tuple(notes))
    notes.append(f"no rule of degree <= {max_degree} fits")
    return Discovery(expansion, expansion_to_spec(expansion), False, notes=tuple(notes))
