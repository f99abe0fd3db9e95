"""Checking catalog identities: value agreement, derivation structure, reports."""
from __future__ import annotations

import datetime as _dt
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .bauer_muir import ModifyingFactors, adjoint_factors, double_transform_recurrence, verify_constancy
from .cf import FunctionCF, approximant_values, bind_cf, equivalence_transform, evaluate, even_part
from .errors import ConfigError, GammaCFError
from .expr import evaluate_definitions
from .fixtures import DEFAULT_SUITE, get_fixture, grid_points
from .gamma import lhs_value
from .mc import moebius_wrap
from .scalar import BigFloat, RationalFunction, as_fraction, format_fraction

__all__ = [
    "CheckResult",
    "Report",
    "SuiteResult",
    "default_tol",
    "exit_status",
    "run_case",
    "run_suite",
    "structure_checks",
]

CLAIM_KINDS = ("theorem", "corollary", "remark")


def default_tol(digits: int) -> Fraction:
    return Fraction(1, 10 ** (digits - 5)) if digits > 5 else Fraction(1)


@dataclass
class Report:
    """Outcome of comparing both sides of one identity at one parameter point."""

    id: str
    kind: str
    bindings: dict
    lhs: Optional[BigFloat]
    rhs: Optional[BigFloat]
    abs_err: Optional[BigFloat]
    rel_err: Optional[BigFloat]
    terms_used: int
    digits: int
    passed: bool
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        def num(v):
            return None if v is None else v.to_string(self.digits)

        def err(v):
            return None if v is None else v.to_string(6)

        return {
            "id": self.id,
            "kind": self.kind,
            "bindings": {k: format_fraction(as_fraction(v)) for k, v in self.bindings.items()},
            "lhs": num(self.lhs),
            "rhs": num(self.rhs),
            "abs_err": err(self.abs_err),
            "rel_err": err(self.rel_err),
            "terms_used": self.terms_used,
            "digits": self.digits,
            "pass": self.passed,
            "notes": list(self.notes),
        }

    def line(self) -> str:
        pts = ", ".join(f"{k}={format_fraction(as_fraction(v))}" for k, v in self.bindings.items())
        status = "PASS" if self.passed else "FAIL"
        e = self.abs_err.to_string(3) if self.abs_err is not None else "-"
        return f"{status} {self.id} [{pts}] abs_err={e} terms={self.terms_used}"


def _failed(fixture, bindings, digits, note) -> Report:
    return Report(fixture.id, fixture.kind, dict(bindings), None, None, None, None, 0, digits, False, [note])


def _perturbed(cf, term: int, part: str, delta):
    def fn(n):
        a, b = cf.term(n)
        if n == term:
            return (a + delta, b) if part == "a" else (a, b + delta)
        return a, b

    return FunctionCF(cf.b0, fn, cf.depth, label=f"{part}_{term} perturbed")


def run_case(fixture_id: str, bindings: dict, digits: int = 40, tol=None, max_terms: int = 100000,
             perturb: Optional[tuple] = None) -> Report:
    """Evaluate both sides of a catalog identity and compare them.

    Problems at a point (domain, poles, zero denominators) become a failed
    report with a note instead of an exception.  Unknown fixture ids raise
    :class:`ConfigError`.  ``perturb = (n, "a" | "b", delta)`` shifts one
    partial numerator or denominator of the right side, for sensitivity
    controls.
    """
    fixture = get_fixture(fixture_id)
    tol = default_tol(digits) if tol is None else as_fraction(tol)
    bindings = {k: as_fraction(v) for k, v in bindings.items()}
    violation = fixture.domain_violation(bindings)
    if violation is not None:
        return _failed(fixture, bindings, digits, f"DomainViolation: {violation}")
    notes = []
    if fixture.kind == "conjecture":
        notes.append("conjecture")
    work = digits + 5
    eval_tol = tol / 100
    try:
        terms = 0
        lhs_converged = True
        if fixture.lhs is not None:
            P = lhs_value(fixture.lhs, bindings, work).value
            lhs = moebius_wrap(P) if fixture.lhs_map == "moebius" else P
        else:
            other = evaluate(bind_cf(fixture.form(fixture.compare), bindings), eval_tol, max_terms, digits=work)
            lhs, terms, lhs_converged = other.value, other.terms_used, other.converged
            notes.append(f"compared with {fixture.compare} ({other.method}, {other.terms_used} terms)")
        cf = bind_cf(fixture.rhs, bindings)
        if perturb is not None:
            n, part, delta = perturb
            cf = _perturbed(cf, n, part, as_fraction(delta))
            notes.append(f"control: {part}_{n} shifted by {format_fraction(as_fraction(delta))}")
        rep = evaluate(cf, eval_tol, max_terms, digits=work)
    except (GammaCFError, ZeroDivisionError) as exc:
        return _failed(fixture, bindings, digits, f"{type(exc).__name__}: {exc}")
    abs_err = abs(lhs - rep.value)
    rel_err = abs_err / abs(lhs) if lhs != 0 else None
    notes.append(f"rhs {rep.method}, error estimate {rep.error_estimate.to_string(3)}")
    if not rep.converged or not lhs_converged:
        notes.append(f"not converged within {max_terms} terms")
    passed = bool(abs_err <= BigFloat(tol, work)) and rep.converged and lhs_converged
    return Report(fixture.id, fixture.kind, bindings, lhs, rep.value, abs_err, rel_err,
                  rep.terms_used + terms, digits, passed, notes)


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------


@dataclass
class SuiteResult:
    reports: list
    exit_code: int
    timestamp: str
    settings: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "timestamp": self.timestamp,
            "settings": self.settings,
            "exit_code": self.exit_code,
            "reports": [r.to_json() for r in self.reports],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def exit_status(reports, strict_conjectures: bool = False) -> int:
    """0 all pass, 1 a claimed identity fails, 3 only conjectures fail."""
    if any(not r.passed and r.kind in CLAIM_KINDS for r in reports):
        return 1
    if any(not r.passed and r.kind == "conjecture" for r in reports):
        return 1 if strict_conjectures else 3
    return 0


def _run_job(job):
    fixture_id, bindings, digits, tol, max_terms = job
    return run_case(fixture_id, bindings, digits, tol, max_terms)


def run_suite(ids=None, grid: str = "default", digits: int = 40, tol=None, max_terms: int = 100000,
              jobs: int = 1, strict_conjectures: bool = False) -> SuiteResult:
    """Run ``ids`` (default: the standard suite) over their grid points."""
    ids = list(ids) if ids else list(DEFAULT_SUITE)
    tol = default_tol(digits) if tol is None else as_fraction(tol)
    job_list = []
    for fid in ids:
        fixture = get_fixture(fid)
        for point in grid_points(fixture, grid):
            job_list.append((fid, point, digits, tol, max_terms))
    if jobs > 1 and len(job_list) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_run_job, job_list))
    else:
        reports = [_run_job(j) for j in job_list]
    settings = {"digits": digits, "tol": format_fraction(tol), "max_terms": max_terms, "grid": grid}
    stamp = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    return SuiteResult(reports, exit_status(reports, strict_conjectures), stamp, settings)


def load_config(path: str) -> dict:
    """Read a JSON run configuration (``fixtures``, ``digits``, ``tol``, ``max_terms``, ``grid``)."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(data) - {"fixtures", "digits", "tol", "max_terms", "grid", "jobs", "strict_conjectures"}
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    for fid in data.get("fixtures", ()):
        get_fixture(fid)
    return data


# ---------------------------------------------------------------------------
# structure
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    informational: bool = False

    def line(self) -> str:
        tag = "PASS" if self.passed else ("INFO" if self.informational else "FAIL")
        return f"{tag} {self.name}: {self.detail}"


def _stage_check(stage, env, N, symbolic):
    cf = bind_cf(stage.cf, env)
    full = evaluate_definitions(stage.cf.definitions, env)
    seq = adjoint_factors(cf, stage.factors.bind(full), N)
    res = verify_constancy(seq)
    ok = bool(res)
    detail = f"phi_even={res.phi_even}, phi_odd={res.phi_odd}" if ok else "adjoint factors are not parity-constant"
    if ok and stage.adjoint_even is not None:
        expected = stage.adjoint_even.evaluate(full)
        if not res.phi_even == expected:
            ok = False
            detail = f"phi_even={res.phi_even} differs from closed form {expected}"
    mode = "symbolic x" if symbolic else "numeric"
    return CheckResult(f"stage {stage.label} ({mode}, N={N})", ok, detail)


def _negative_control(stage, env, N):
    cf = bind_cf(stage.cf, env)
    full = evaluate_definitions(stage.cf.definitions, env)
    try:
        seq = adjoint_factors(cf, ModifyingFactors.zero().bind(full), N)
        constant = bool(verify_constancy(seq))
    except ZeroDivisionError:
        constant = False
    return CheckResult(f"control r=0 on {stage.label}", not constant,
                       "adjoint factors vary as expected" if not constant else "unexpectedly constant")


def _link_check(link, bindings, digits, max_terms):
    env = dict(bindings)
    full = evaluate_definitions(link.definitions, env)
    shifted = dict(env)
    shifted["x"] = env["x"] + link.shift
    tol = Fraction(1, 10 ** digits)
    o = evaluate(bind_cf(link.outer, shifted), tol, max_terms, digits=digits + 5)
    i = evaluate(bind_cf(link.inner, env), tol, max_terms, digits=digits + 5)
    left = o.value + link.outer_offset.evaluate(full)
    right = i.value + link.inner_offset.evaluate(full)
    residual = abs(left * right - link.product.evaluate(full))
    # propagate both truncation estimates through the product
    bound = abs(left) * i.error_estimate + abs(right) * o.error_estimate \
        + o.error_estimate * i.error_estimate + BigFloat(tol, digits + 5)
    ok = bool(residual <= 10 * bound)
    detail = f"residual {residual.to_string(3)}, estimate bound {bound.to_string(3)}"
    return CheckResult(f"link {link.label}", ok, detail, informational=True)


def _even_check(fixture, bindings, n=10):
    ef = fixture.even_form
    src = bind_cf(fixture.form(ef.source), bindings)
    tgt = bind_cf(fixture.form(ef.target), bindings)
    scaled = equivalence_transform(even_part(src), lambda k: ef.factor.evaluate({"m": Fraction(k)}))
    termwise = scaled.b0 == tgt.b0 and all(scaled.term(k) == tgt.term(k) for k in range(1, n + 1))
    va, vb = approximant_values(src, 2 * n), approximant_values(tgt, n)
    approx = all(va[2 * k] == vb[k] for k in range(n + 1))
    return CheckResult(f"even part {ef.source} -> {ef.target}", termwise and approx,
                       f"termwise={termwise}, approximants f_2n=g_n for n<={n}: {approx}")


def structure_checks(fixture_id: str, bindings: dict, N: int = 50, symbolic: bool = True,
                     digits: int = 40, links: bool = True, link_terms: int = 20000) -> list:
    """Derivation checks for one fixture at one point.

    Covers Bauer-Muir stage constancy (numeric, and with ``x`` symbolic),
    the zero-factor control, the shift recurrence and the even-part
    relation.  Link checks chain numerically evaluated fractions whose
    convergence may be slow, so they are informational.
    """
    fixture = get_fixture(fixture_id)
    env = {k: as_fraction(v) for k, v in bindings.items()}
    out = []
    for stage in fixture.stages:
        out.append(_stage_check(stage, env, N, False))
        if symbolic:
            sym = dict(env)
            sym["x"] = RationalFunction.variable("x")
            out.append(_stage_check(stage, sym, N, True))
    if fixture.stages:
        out.append(_negative_control(fixture.stages[0], env, N))
    if fixture.recurrence is not None:
        rec = double_transform_recurrence(fixture, env, digits)
        limit = BigFloat(default_tol(digits), digits)
        out.append(CheckResult("shift recurrence", bool(rec["residual"] <= limit),
                               f"residual {rec['residual'].to_string(3)}"))
    if fixture.even_form is not None:
        out.append(_even_check(fixture, env))
    if links:
        for link in fixture.links:
            try:
                out.append(_link_check(link, env, digits, link_terms))
            except (GammaCFError, ZeroDivisionError) as exc:
                out.append(CheckResult(f"link {link.label}", False, f"{type(exc).__name__}: {exc}", True))
    return out
