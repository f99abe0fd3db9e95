"""Command line interface: ``gammacf eval|transform|verify|discover``."""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .bauer_muir import ModifyingFactors, bauer_muir_transform, solve_modifying_factors
from .cf import CFSpec, bind_cf, equivalence_transform, evaluate, even_part
from .errors import ConfigError, GammaCFError
from .expr import Expr, evaluate_definitions
from .fixtures import DEFAULT_SUITE, FIXTURES, get_fixture, grid_points
from .mc import ShiftRatioTarget, discover_rule, to_theorem_form
from .scalar import Poly, RationalFunction, format_fraction
from .verify import default_tol, load_config, run_suite, structure_checks

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_CONJECTURE = 0, 1, 2, 3


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"not a rational number: {text!r}") from None


def _bindings(items) -> dict:
    out = {}
    for item in items or ():
        name, sep, value = item.partition("=")
        if not sep or not name.strip():
            raise ConfigError(f"binding must look like name=p/q, got {item!r}")
        out[name.strip()] = _fraction(value)
    return out


def _load_spec(source: str, form: str | None) -> CFSpec:
    """A CF spec from a JSON file, or a catalog fixture's fraction by id."""
    if os.path.exists(source):
        try:
            with open(source, encoding="utf-8") as fh:
                return CFSpec.loads(fh.read())
        except OSError as exc:
            raise ConfigError(f"cannot read {source}: {exc}") from None
    if source in FIXTURES:
        fixture = get_fixture(source)
        if form and form.startswith("stage:"):
            label = form.split(":", 1)[1]
            for stage in fixture.stages:
                if stage.label == label:
                    return stage.cf
            raise ConfigError(f"fixture {source} has no stage {label!r}")
        return fixture.form(form or "rhs")
    raise ConfigError(f"{source!r} is neither a spec file nor a fixture id")


def _fmt(v) -> str:
    if isinstance(v, Fraction):
        return format_fraction(v)
    return str(v)


def _write(text: str, path: str | None):
    if path:
        try:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(text + "\n")
        except OSError as exc:
            raise ConfigError(f"cannot write {path}: {exc}") from None
    else:
        print(text)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_eval(args) -> int:
    spec = _load_spec(args.spec, args.form)
    cf = bind_cf(spec, _bindings(args.bind))
    tol = _fraction(args.tol) if args.tol else default_tol(args.digits)
    rep = evaluate(cf, tol, args.max_terms, digits=args.digits + 5)
    print(f"value        {rep.value.to_string(args.digits)}")
    print(f"terms_used   {rep.terms_used}")
    print(f"error_est    {rep.error_estimate.to_string(3)}")
    print(f"converged    {rep.converged}")
    print(f"method       {rep.method}")
    return EXIT_OK if rep.converged else EXIT_FAIL


def cmd_transform(args) -> int:
    spec = _load_spec(args.spec, args.form)
    env = _bindings(args.bind)
    cf = bind_cf(spec, env)
    if args.solve_factors:
        for i, bound in enumerate(solve_modifying_factors(cf)):
            print(f"solution {i + 1}: (u1,u2,v1,v2,w1,w2) = ({', '.join(_fmt(v) for v in bound.as_tuple())})")
        return EXIT_OK
    if args.bauer_muir:
        try:
            with open(args.bauer_muir, encoding="utf-8") as fh:
                factors = ModifyingFactors.from_json(json.load(fh))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read modifying factors: {exc}") from None
        full = evaluate_definitions(spec.definitions, env)
        out = bauer_muir_transform(cf, factors.bind(full))
    elif args.even_part:
        out = even_part(cf)
    elif args.equiv:
        expr = Expr(args.equiv)
        out = equivalence_transform(cf, lambda n: expr.evaluate(dict(env, n=Fraction(n))))
    else:
        raise ConfigError("choose one of --bauer-muir, --even-part, --equiv or --solve-factors")
    print(f"b0 = {_fmt(out.b0)}")
    for n in range(1, args.terms + 1):
        a, b = out.term(n)
        print(f"{n:4d}  a = {_fmt(a)}  b = {_fmt(b)}")
    if all(isinstance(v, Fraction) for v in env.values()) and "x" in env:
        rep = evaluate(out, default_tol(args.digits), args.max_terms, digits=args.digits + 5, accelerate=False)
        print(f"value ~ {rep.value.to_string(args.digits)} ({rep.terms_used} terms, converged={rep.converged})")
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.list:
        for fid, fx in FIXTURES.items():
            tag = "*" if fid in DEFAULT_SUITE else " "
            print(f"{tag} {fid:12s} {fx.kind}")
        return EXIT_OK
    cfg = load_config(args.config) if args.config else {}
    ids = (args.ids or []) + (args.case or []) or cfg.get("fixtures") or None
    digits = args.digits if args.digits is not None else int(cfg.get("digits", 40))
    tol = _fraction(args.tol) if args.tol else (_fraction(str(cfg["tol"])) if "tol" in cfg else None)
    max_terms = args.max_terms if args.max_terms is not None else int(cfg.get("max_terms", 100000))
    grid = args.grid or cfg.get("grid", "default")
    jobs = args.jobs if args.jobs is not None else int(cfg.get("jobs", 1))
    strict = args.strict_conjectures or bool(cfg.get("strict_conjectures", False))
    for fid in ids or ():
        get_fixture(fid)
    result = run_suite(ids, grid, digits, tol, max_terms, jobs, strict)
    for r in result.reports:
        print(r.line())
    payload = result.to_json()
    code = result.exit_code
    if args.structure_checks:
        checks = []
        for fid in ids or DEFAULT_SUITE:
            fx = get_fixture(fid)
            if not (fx.stages or fx.recurrence or fx.even_form):
                continue
            for point in grid_points(fx, grid)[:1]:
                for c in structure_checks(fid, point, args.structure_checks, digits=digits):
                    print(f"  {fid}: {c.line()}")
                    checks.append({"id": fid, "check": c.name, "pass": c.passed,
                                   "informational": c.informational, "detail": c.detail})
                    if not c.passed and not c.informational:
                        code = EXIT_FAIL
        payload["structure_checks"] = checks
        payload["exit_code"] = code
    if args.out:
        _write(json.dumps(payload, indent=2), args.out)
    passed = sum(r.passed for r in result.reports)
    print(f"{passed}/{len(result.reports)} cases passed; exit {code}")
    return code


def _ratio_target(path: str) -> ShiftRatioTarget:
    """A target from a JSON file with ``num``/``den`` coefficient lists in x (constant first)."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        num = Poly([_fraction(str(c)) for c in data["num"]], "x")
        den = Poly([_fraction(str(c)) for c in data["den"]], "x")
        kappa0 = data.get("kappa0")
        lambda0 = data.get("lambda0")
        return ShiftRatioTarget(RationalFunction(num, den), _fraction(str(data.get("step", "1"))),
                                int(kappa0) if kappa0 is not None else None,
                                _fraction(str(lambda0)) if lambda0 is not None else None, path)
    except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
        raise ConfigError(f"cannot read ratio target {path}: {exc}") from None


def _target(name: str, bindings: dict) -> ShiftRatioTarget:
    if os.path.exists(name):
        return _ratio_target(name)
    fixture = get_fixture(name)
    if fixture.lhs is None or fixture.lhs_map != "plain":
        raise ConfigError(f"{name} has no plain gamma-ratio left side to expand")
    missing = [p for p in fixture.parameters if p != "x" and p not in bindings]
    if missing:
        raise ConfigError(f"bind {', '.join(missing)}")
    return ShiftRatioTarget.from_gamma(fixture.lhs, bindings, label=name)


def cmd_discover(args) -> int:
    name = args.target or args.fixture
    if not name:
        raise ConfigError("give a fixture id or ratio file to expand")
    target = _target(name, _bindings(args.bind))
    found = discover_rule(target, args.depth, args.max_degree, order=args.order)
    exp = found.expansion
    _, pairs = to_theorem_form(exp)
    for j, (term, (lam, phi)) in enumerate(zip(exp.terms, pairs)):
        if j > args.depth:
            break
        flag = "  (tie)" if term.tie_flag else ""
        rate = "exact" if exp.rates[j] == float("inf") else exp.rates[j]
        print(f"MC_{j}: lambda={_fmt(term.lam)} Phi={term.phi}  rate={rate}"
              f"  | theorem form a={_fmt(lam)} b={phi}{flag}")
    for note in found.notes:
        print(f"note: {note}")
    _write(found.spec.dumps(), args.out)
    return EXIT_OK if found.fitted or exp.exact else EXIT_FAIL


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gammacf", description="Continued fractions for gamma-function ratios.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, digits_default=40):
        sp.add_argument("--bind", action="append", metavar="NAME=P/Q", help="parameter binding (repeatable)")
        sp.add_argument("--digits", type=int, default=digits_default)
        sp.add_argument("--max-terms", type=int, default=100000)

    e = sub.add_parser("eval", help="evaluate a continued fraction")
    e.add_argument("spec", help="CF spec JSON file or fixture id")
    e.add_argument("--form", help="fixture form name (default rhs) or stage:LABEL")
    e.add_argument("--tol")
    common(e)
    e.set_defaults(func=cmd_eval)

    t = sub.add_parser("transform", help="transform a continued fraction and list its terms")
    t.add_argument("spec", help="CF spec JSON file or fixture id")
    t.add_argument("--form", help="fixture form name (default rhs) or stage:LABEL")
    mode = t.add_mutually_exclusive_group()
    mode.add_argument("--bauer-muir", metavar="FACTORS.json")
    mode.add_argument("--even-part", action="store_true")
    mode.add_argument("--equiv", metavar="EXPR", help="factor c_n as an expression in n")
    mode.add_argument("--solve-factors", action="store_true", help="list modifying factors with constant adjoints")
    t.add_argument("--terms", type=int, default=8)
    common(t, 20)
    t.set_defaults(func=cmd_transform)

    v = sub.add_parser("verify", help="check catalog identities")
    v.add_argument("ids", nargs="*", help="fixture ids (default: the standard suite)")
    v.add_argument("--case", action="append", metavar="ID", help="fixture id (repeatable)")
    v.add_argument("--config", "--suite", dest="config", metavar="FILE", help="JSON run configuration")
    v.add_argument("--digits", type=int)
    v.add_argument("--tol")
    v.add_argument("--max-terms", type=int)
    v.add_argument("--grid", choices=("default", "full"))
    v.add_argument("--jobs", type=int)
    v.add_argument("--out")
    v.add_argument("--structure-checks", type=int, metavar="N", default=0,
                   help="also check derivation structure with N adjoint terms")
    v.add_argument("--strict-conjectures", action="store_true")
    v.add_argument("--list", action="store_true", help="list fixtures and exit")
    v.set_defaults(func=cmd_verify)

    d = sub.add_parser("discover", help="multiple-correction expansion of a catalog left side")
    d.add_argument("fixture", nargs="?", help="fixture id or ratio JSON file")
    d.add_argument("--target", help="same as the positional argument")
    d.add_argument("--order", type=int, help="initial series truncation order")
    d.add_argument("--bind", action="append", metavar="NAME=P/Q")
    d.add_argument("--depth", type=int, default=3)
    d.add_argument("--max-degree", type=int, default=6)
    d.add_argument("--out")
    d.set_defaults(func=cmd_discover)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (GammaCFError, ZeroDivisionError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
