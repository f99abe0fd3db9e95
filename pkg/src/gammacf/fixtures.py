"""Catalog of gamma-ratio continued fraction identities.

Each :class:`TheoremFixture` bundles a gamma-ratio left side, the continued
fraction claimed to equal it, alternative forms of that fraction, the
two-stage Bauer-Muir data used to derive it, the shift recurrence the
internal fraction ``F`` satisfies, and the parameter grid used for checks.

Parameter names: ``x``, ``alpha``, ``beta`` (three-gamma families) and
``l``, ``n``, ``eta`` (the eight-gamma family).  Derived constants such as
``rho`` or ``h`` are local to a fixture and listed in its ``definitions``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .bauer_muir import ModifyingFactors
from .cf import CFSpec, CoefficientRule
from .errors import ConfigError
from .expr import Expr
from .gamma import GammaRatioSpec

__all__ = [
    "CONJECTURE_IDS",
    "DEFAULT_SUITE",
    "EvenForm",
    "FIXTURES",
    "Link",
    "Recurrence",
    "Stage",
    "TheoremFixture",
    "get_fixture",
    "grid_points",
]

F = Fraction


# ---------------------------------------------------------------------------
# fixture building blocks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Stage:
    """One Bauer-Muir step: transform ``cf`` with ``factors``.

    ``adjoint_even`` is the closed form of the even-index adjoint factor
    ``phi_{2m}``; odd-index factors are its negatives.  ``None`` means only
    constancy is asserted.
    """

    label: str
    cf: CFSpec
    factors: ModifyingFactors
    adjoint_even: Optional[Expr] = None

    def __post_init__(self):
        if self.adjoint_even is not None:
            object.__setattr__(self, "adjoint_even", Expr(self.adjoint_even))


@dataclass(frozen=True)
class Link:
    """Numeric relation ``(outer(x + shift) + outer_offset) * (inner(x) + inner_offset) = product``.

    Offsets and the product are evaluated at the unshifted bindings.
    """

    label: str
    outer: CFSpec
    inner: CFSpec
    product: Expr
    shift: Fraction = F(0)
    outer_offset: Expr = Expr("0")
    inner_offset: Expr = Expr("0")
    definitions: tuple = ()

    def __post_init__(self):
        for name in ("product", "outer_offset", "inner_offset"):
            object.__setattr__(self, name, Expr(getattr(self, name)))
        object.__setattr__(self, "shift", F(self.shift))
        object.__setattr__(self, "definitions", tuple((k, Expr(v)) for k, v in self.definitions))


@dataclass(frozen=True)
class Recurrence:
    """``G(x) / G(x + step) = ratio`` where ``G = transform(value of cf)``."""

    cf: CFSpec
    ratio: Expr
    step: Fraction = F(2)
    definitions: tuple = ()
    transform: Optional[Callable] = None
    transform_label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "ratio", Expr(self.ratio))
        object.__setattr__(self, "step", F(self.step))
        object.__setattr__(self, "definitions", tuple((k, Expr(v)) for k, v in self.definitions))


@dataclass(frozen=True)
class EvenForm:
    """``even_part(forms[source])`` rescaled by ``c_k = factor(k)`` equals ``forms[target]`` termwise."""

    source: str
    target: str
    factor: Expr = Expr("1")

    def __post_init__(self):
        object.__setattr__(self, "factor", Expr(self.factor))


@dataclass(frozen=True)
class TheoremFixture:
    """A displayed identity ``lhs_map(gamma ratio) = continued fraction``.

    ``lhs_map`` is ``"plain"`` or ``"moebius"`` (the left side is
    ``(1 - P) / (1 + P)`` of the gamma ratio ``P``).  For exploratory
    fixtures ``lhs`` is ``None`` and ``compare`` names the form whose value
    is compared with ``rhs``.
    """

    id: str
    kind: str
    parameters: tuple
    lhs: Optional[GammaRatioSpec]
    rhs: CFSpec
    lhs_map: str = "plain"
    forms: dict = field(default_factory=dict)
    stages: tuple = ()
    links: tuple = ()
    recurrence: Optional[Recurrence] = None
    even_form: Optional[EvenForm] = None
    domain: Optional[Callable] = None
    domain_text: str = "x > 0"
    grid: tuple = ()
    compare: Optional[str] = None
    notes: str = ""

    def form(self, name: str) -> CFSpec:
        if name == "rhs":
            return self.rhs
        try:
            return self.forms[name]
        except KeyError:
            raise ConfigError(f"fixture {self.id} has no form {name!r}") from None

    def domain_violation(self, bindings: dict) -> Optional[str]:
        """A description of the violated constraint, or ``None``."""
        missing = [p for p in self.parameters if p not in bindings]
        if missing:
            return f"missing binding for {', '.join(missing)}"
        if self.domain is None:
            return None
        env = {k: F(v) for k, v in bindings.items()}
        return None if self.domain(env) else f"requires {self.domain_text}"


def _spec(parameters, b0, cases, head=(), definitions=()):
    period = len(cases)
    return CFSpec(parameters, b0, CoefficientRule(period, tuple(cases)), head, definitions)


def _is_int(v: Fraction) -> bool:
    return v.denominator == 1


def _odd_int(v: Fraction) -> bool:
    return _is_int(v) and v.numerator % 2 == 1


def _even_int(v: Fraction) -> bool:
    return _is_int(v) and v.numerator % 2 == 0


# ---------------------------------------------------------------------------
# grids
# ---------------------------------------------------------------------------

AB_POINTS = ((F(1, 3), F(1, 5)), (F(1, 2), F(1, 3)), (F(1, 3), F(1, 3)))
X_POINTS = (F(5, 2), F(3), F(7))
X_FULL = (F(5, 2), F(3), F(7), F(21, 2))


def _ab_grid():
    return tuple({"x": x, "alpha": a, "beta": b} for x, (a, b) in zip(X_POINTS, AB_POINTS))


def _ab_full():
    return tuple({"x": x, "alpha": a, "beta": b} for x in X_FULL for a, b in AB_POINTS)


def _x_grid():
    return tuple({"x": x} for x in X_POINTS)


# ---------------------------------------------------------------------------
# three-gamma families sharing one left side
# ---------------------------------------------------------------------------

AB = ("x", "alpha", "beta")

LHS_T1 = GammaRatioSpec.build(
    num=("alpha", "1-alpha-beta", "beta"),
    den=("2-alpha", "1+alpha+beta", "2-beta"),
)

RATIO_T1 = "(x+alpha)*(x+1-alpha-beta)*(x+beta)/((x+2-alpha)*(x+1+alpha+beta)*(x+2-beta))"

# values p_m and q_m of the contracted form, with q_0 from the same expression at m = 0
P_T1 = "-(2*m-alpha-beta)*(2*m-2+alpha+beta)*((2*m-1)^2-alpha^2)*((2*m-1)^2-beta^2)/(16*(2*m-1)^2)"
Q_T1 = "(4*m^2+alpha-alpha^2+beta-beta^2-alpha*beta)/2+alpha*beta*(alpha+beta-1)/(2*(2*m-1)*(2*m+1))"
Q0_T1 = "(alpha-alpha^2+beta-beta^2-alpha*beta)/2-alpha*beta*(alpha+beta-1)/2"

PQ_T1 = _spec(AB, "0", [(P_T1, "x^2+" + f"({Q_T1})")], head=(("2", f"(x^2+{Q0_T1})/2"),))


def _t1_domain(env):
    a, b = env["alpha"], env["beta"]
    return env["x"] > 0 or _odd_int(a) or _odd_int(b) or _even_int(a + b)


T1_DOMAIN_TEXT = "x > 0, or alpha or beta an odd integer, or alpha + beta an even integer"


def _theorem1(j, a_even, a_odd, lam_even, defs, r_tuple, phi_even, d_head, d_even, link1,
              gamma_tuple, psi_even, link2, extra_stages=(), notes=""):
    # residue 0 holds the even-index terms n = 2m, residue 1 the odd ones
    F_spec = _spec(AB, f"({lam_even})/2", [(a_even, lam_even), (a_odd, "2*m-1")], definitions=defs)
    D_spec = _spec(AB, d_head, [(a_even, d_even), (a_odd, "2*m-1")], definitions=defs)
    rhs = _spec(
        AB, "0",
        [(f"({a_even})/(2*m-1)", lam_even), (f"({a_odd})/(2*m-1)", "1")],
        head=(("2", f"({lam_even})/2"),),
        definitions=defs,
    )
    stages = (
        Stage("first", F_spec, ModifyingFactors.from_tuple(*r_tuple), phi_even),
        *extra_stages,
        Stage("second", D_spec, ModifyingFactors.from_tuple(*gamma_tuple), psi_even),
    )
    links = (
        Link("F(x) D(x)", F_spec, D_spec, link1, definitions=defs),
        Link("F(x+2) D(x)", F_spec, D_spec, link2, shift=2, definitions=defs),
    )
    return TheoremFixture(
        id=f"theorem1-j{j}",
        kind="theorem",
        parameters=AB,
        lhs=LHS_T1,
        rhs=rhs,
        forms={"F": F_spec, "D": D_spec, "pq": PQ_T1},
        stages=stages,
        links=links,
        recurrence=Recurrence(F_spec, RATIO_T1, 2, defs),
        even_form=EvenForm("rhs", "pq", "1") if j == 1 else None,
        domain=_t1_domain,
        domain_text=T1_DOMAIN_TEXT,
        grid=_ab_grid(),
        notes=notes,
    )


def _make_theorem1_j1():
    a_e = "(2*m-2+alpha+beta)*(2*m-1-alpha)*(2*m-1-beta)/4"
    a_o = "(2*m-alpha-beta)*(2*m-1+alpha)*(2*m-1+beta)/4"
    defs = (("rho", "2+2*x+x^2+alpha-alpha^2+beta-alpha*beta-beta^2"),)
    alt = Stage(
        "first-alternate",
        _spec(AB, "(x^2-1)/2", [(a_e, "x^2-1"), (a_o, "2*m-1")], definitions=defs),
        ModifyingFactors.from_tuple(
            "0", "-2/(x-1)", "1-x", "(3-x)/(x-1)", "(1-x^2)/2", "(-4*x+rho)/(2*(1-x))"
        ),
        None,
    )
    return _theorem1(
        1, a_e, a_o, "x^2-1", defs,
        r_tuple=("0", "2/(1+x)", "1+x", "-(3+x)/(1+x)", "(1-x^2)/2", "rho/(2*(1+x))"),
        phi_even="-(x+alpha)*(x+beta)*(x+1-alpha-beta)/4",
        d_head="-rho/2", d_even="-(4*m^2+rho)",
        link1="-(x+alpha)*(x+beta)*(x+1-alpha-beta)*(1+x)/4",
        gamma_tuple=("2", "0", "1-x", "-1", "rho/2", "(3+x)/2"),
        psi_even="(2+x-alpha)*(2+x-beta)*(1+x+alpha+beta)/4",
        link2="-(1+x)*(2+x-alpha)*(2+x-beta)*(1+x+alpha+beta)/4",
        extra_stages=(alt,),
        notes="alternate first-stage factors use the same rho as the main ones",
    )


def _make_theorem1_j2():
    a_e = "(2*m-2+alpha+beta)*(2*m-1+alpha)*(2*m-1+beta)/4"
    a_o = "(2*m-alpha-beta)*(2*m-1-alpha)*(2*m-1-beta)/4"
    defs = (
        ("omega", "x^2-(1-alpha-beta)^2"),
        ("rho", "x+1-alpha-beta"),
        ("h", "(x+1)^2+1-alpha-beta+alpha*beta"),
        ("s", "x-1+alpha+beta"),
    )
    return _theorem1(
        2, a_e, a_o, "omega", defs,
        r_tuple=("0", "2/rho", "rho", "-1-2/rho", "-omega/2", "h/(2*rho)"),
        phi_even="-(x+1)*(x+alpha)*(x+beta)/4",
        d_head="-h/2", d_even="-(4*m^2+h)",
        link1="-(x+1)*(x+alpha)*(x+beta)*rho/4",
        gamma_tuple=("2", "0", "-s", "-1", "h/2", "1+rho/2"),
        psi_even="(x+1)*(x+2-alpha)*(x+2-beta)/4",
        link2="-(x+1)*(x+2-alpha)*(x+2-beta)*(s+2)/4",
    )


def _make_theorem1_j3():
    a_e = "(2*m-alpha-beta)*(2*m-1+alpha)*(2*m-1-beta)/4"
    a_o = "(2*m-2+alpha+beta)*(2*m-1-alpha)*(2*m-1+beta)/4"
    defs = (("rho", "1+2*x+x^2+alpha-alpha^2+beta-alpha*beta"),)
    return _theorem1(
        3, a_e, a_o, "x^2-beta^2", defs,
        r_tuple=("0", "2/(x+beta)", "x+beta", "-(2+x+beta)/(x+beta)", "(beta^2-x^2)/2", "rho/(2*(x+beta))"),
        phi_even="-(x+1)*(x+alpha)*(x+1-alpha-beta)/4",
        d_head="-rho/2", d_even="-(4*m^2+rho)",
        link1="-(x+1)*(x+alpha)*(x+1-alpha-beta)*(x+beta)/4",
        gamma_tuple=("2", "0", "-x+beta", "-1", "rho/2", "(2+x+beta)/2"),
        psi_even="(1+x)*(2+x-alpha)*(1+x+alpha+beta)/4",
        link2="-(1+x)*(2+x-alpha)*(1+x+alpha+beta)*(2+x-beta)/4",
    )


def _make_theorem2():
    a_e = "(2*m-alpha-beta)*(2*m-1+alpha)*(2*m-1+beta)/4"
    a_o = "(2*m-2+alpha+beta)*(2*m-1-alpha)*(2*m-1-beta)/4"
    defs = (("w2", "(-(x-1)^2+alpha^2-alpha+alpha*beta+beta^2-beta)/2"),)
    F_spec = _spec(AB, "x/2", [(a_e, "x"), (a_o, "(2*m-1)*x")], definitions=defs)
    D_spec = _spec(AB, "w2", [(a_e, "-4*m^2+2*w2"), (a_o, "2*m-1")], definitions=defs)
    rhs = _spec(AB, "0", [(f"({a_e})/(2*m-1)", "x"), (f"({a_o})/(2*m-1)", "x")],
                head=(("1", "x/2"),), definitions=defs)
    phi = "(x-1+alpha)*(x-alpha-beta)*(x-1+beta)/4"
    psi = "-(x-1-alpha)*(x-2+alpha+beta)*(x-1-beta)/4"
    return TheoremFixture(
        id="theorem2",
        kind="theorem",
        parameters=AB,
        lhs=GammaRatioSpec.build(num=("1-alpha", "alpha+beta", "1-beta"),
                                 den=("1+alpha", "2-alpha-beta", "1+beta")),
        rhs=rhs,
        forms={"F": F_spec, "D": D_spec},
        stages=(
            Stage("first", F_spec, ModifyingFactors.from_tuple("0", "-2", "-1", "2-x", "-x/2", "w2"), phi),
            Stage("second", D_spec, ModifyingFactors.from_tuple("2", "0", "x", "-1", "-w2", "1-x/2"), psi),
        ),
        links=(
            Link("F(x) D(x)", F_spec, D_spec, f"-({phi})", definitions=defs),
            Link("F(x-2) D(x)", F_spec, D_spec, psi, shift=-2, definitions=defs),
        ),
        recurrence=Recurrence(
            F_spec,
            "(x+1-alpha)*(x+alpha+beta)*(x+1-beta)/((x+1+alpha)*(x+2-alpha-beta)*(x+1+beta))",
            2, defs,
        ),
        domain=_t1_domain,
        domain_text=T1_DOMAIN_TEXT,
        grid=_ab_grid(),
    )


A_T34_EVEN = "(2*m-alpha-beta)*(2*m-alpha)*(2*m-beta)/4"
A_T34_ODD = "(2*m-2+alpha+beta)*(2*m-2+alpha)*(2*m-2+beta)/4"


def _t34_domain(env):
    a, b = env["alpha"], env["beta"]
    return env["x"] > 1 - a - b or _even_int(a) or _even_int(b) or _even_int(a + b)


T34_DOMAIN_TEXT = "x > 1 - alpha - beta, or alpha, beta or alpha + beta an even integer"


def _make_theorem3():
    defs = (("omega", "x+2*(1-alpha-beta)"), ("h", "(x-alpha-beta)^2+alpha*beta"))
    F_spec = _spec(AB, "omega/2", [(A_T34_EVEN, "omega"), (A_T34_ODD, "(2*m-1)*x")], definitions=defs)
    D_spec = _spec(AB, "-h/2", [(A_T34_EVEN, "-(4*m^2+h)"), (A_T34_ODD, "2*m-1")], definitions=defs)
    rhs = _spec(AB, "0", [(f"({A_T34_EVEN})/(2*m-1)", "x+2*(1-alpha-beta)"), (f"({A_T34_ODD})/(2*m-1)", "x")],
                head=(("1", "(x+2*(1-alpha-beta))/2"),))
    phi = "(x-alpha)*(x-alpha-beta)*(x-beta)/4"
    psi = "-(x-alpha-2*beta)*(x-alpha-beta)*(x-2*alpha-beta)/4"
    return TheoremFixture(
        id="theorem3",
        kind="theorem",
        parameters=AB,
        lhs=GammaRatioSpec.build(num=("2-2*alpha-beta", "2", "2-alpha-2*beta"),
                                 den=("2-alpha", "4-2*alpha-2*beta", "2-beta")),
        rhs=rhs,
        forms={"F": F_spec, "D": D_spec},
        stages=(
            Stage("first", F_spec, ModifyingFactors.from_tuple(
                "0", "-2*x/omega", "-omega/x", "-x+2*x/omega", "-omega/2", "-x*h/(2*omega)"), phi),
            Stage("second", D_spec, ModifyingFactors.from_tuple(
                "2", "0", "x", "-1", "h/2", "-x/2+alpha+beta"), psi),
        ),
        links=(
            Link("F(x) D(x)", F_spec, D_spec, f"-({phi})*omega/x", definitions=defs),
            Link("F(x-2) D(x)", F_spec, D_spec, psi, shift=-2, definitions=defs),
        ),
        recurrence=Recurrence(
            F_spec,
            "(x+2-alpha-2*beta)*(x+2)*(x+2-2*alpha-beta)/((x+2-alpha)*(x+4-2*alpha-2*beta)*(x+2-beta))",
            2, defs,
        ),
        domain=_t34_domain,
        domain_text=T34_DOMAIN_TEXT,
        grid=_ab_grid(),
        notes="the second-stage fraction starts at -h/2",
    )


def _make_theorem4():
    defs = (
        ("omega", "x+2*(1-alpha-beta)"),
        ("h", "(x-alpha+2)^2+(-4-2*x+3*alpha)*beta+beta^2"),
    )
    F_spec = _spec(AB, "x/2", [(A_T34_EVEN, "x"), (A_T34_ODD, "(2*m-1)*omega")], definitions=defs)
    D_spec = _spec(AB, "h/2", [(A_T34_EVEN, "4*m^2+h"), (A_T34_ODD, "-(2*m-1)")], definitions=defs)
    rhs = _spec(AB, "0", [(f"({A_T34_EVEN})/(2*m-1)", "x"), (f"({A_T34_ODD})/(2*m-1)", "x+2*(1-alpha-beta)")],
                head=(("1", "x/2"),))
    phi = "-(x+2-alpha-2*beta)*(x+2-alpha-beta)*(x+2-2*alpha-beta)/4"
    psi = "(x+2-alpha)*(x+2-alpha-beta)*(x+2-beta)/4"
    return TheoremFixture(
        id="theorem4",
        kind="theorem",
        parameters=AB,
        lhs=GammaRatioSpec.build(num=("2-2*alpha-beta", "0", "2-alpha-2*beta"),
                                 den=("2-alpha", "2-2*alpha-2*beta", "2-beta")),
        rhs=rhs,
        forms={"F": F_spec, "D": D_spec},
        stages=(
            Stage("first", F_spec, ModifyingFactors.from_tuple(
                "0", "2*omega/x", "x/omega", "-(2+x)*omega/x", "-x/2", "h*omega/(2*x)"), phi),
            Stage("second", D_spec, ModifyingFactors.from_tuple(
                "-2", "0", "omega", "1", "-h/2", "-1-x/2"), psi),
        ),
        links=(
            Link("F(x) D(x)", F_spec, D_spec, f"-({phi})*x/omega", definitions=defs),
            Link("F(x+2) D(x)", F_spec, D_spec, psi, shift=2, definitions=defs),
        ),
        recurrence=Recurrence(
            F_spec,
            "(x+2-alpha-2*beta)*x*(x+2-2*alpha-beta)/((x+2-alpha)*(x+2-2*alpha-2*beta)*(x+2-beta))",
            2, defs,
        ),
        domain=_t34_domain,
        domain_text=T34_DOMAIN_TEXT,
        grid=_ab_grid(),
    )


def _q_transform(value, env):
    # G = (F - sigma) / (F + sigma), the gamma ratio P in disguise
    a, b = env["alpha"], env["beta"]
    sigma = a * b * (a + b) / 4
    return (value - sigma) / (value + sigma)


def _make_theorem5():
    defs = (
        ("sigma", "alpha*beta*(alpha+beta)/4"),
        ("rho", "(x+1)^2-alpha^2-alpha*beta-beta^2"),
        ("w1", "(1+x)*(3+x^2-alpha^2-alpha*beta-beta^2)/2"),
        ("b0x", "x^2-1-sigma"),
    )
    a_e = "(2*m+alpha)*(2*m-alpha-beta)*(2*m+beta)/4"
    a_o = "(2*m-alpha)*(2*m+alpha+beta)*(2*m-beta)/4"
    F_spec = _spec(AB, "b0x", [(a_e, "(x^2-1)*(2*m+1)"), (a_o, "1")], definitions=defs)
    D_spec = _spec(AB, "(x+3)/2", [(a_e, "2*m+1"), (a_o, "-(4*m^2+rho)")], definitions=defs)
    rhs = _spec(AB, "0", [(a_e, "(x^2-1)*(2*m+1)"), (a_o, "1")], head=(("sigma", "b0x"),), definitions=defs)
    kappa = "-((2*m)^2-alpha^2)*((2*m)^2-(alpha+beta)^2)*((2*m)^2-beta^2)/(16*(2*m-1)*(2*m+1))"
    lam = "(4*m^2+4*m+2-alpha^2-alpha*beta-beta^2)/2"
    pq = _spec(AB, "0", [(kappa, f"x^2+{lam}")],
               head=(("sigma", "x^2+(2-alpha^2-alpha*beta-beta^2)/2"),), definitions=defs)
    phi = "(x+1+alpha)*(x+1-alpha-beta)*(x+1+beta)/4"
    psi = "-(x+1-alpha)*(x+1+alpha+beta)*(x+1-beta)/4"
    return TheoremFixture(
        id="theorem5",
        kind="theorem",
        parameters=AB,
        lhs=GammaRatioSpec.build(num=("1-alpha", "1+alpha+beta", "1-beta"),
                                 den=("1+alpha", "1-alpha-beta", "1+beta")),
        lhs_map="moebius",
        rhs=rhs,
        forms={"F": F_spec, "D": D_spec, "pq": pq},
        stages=(
            Stage("first", F_spec, ModifyingFactors.from_tuple(
                "2*(1+x)", "0", "3+2*x-x^2", "1/(1+x)", "w1", "-1/2"), phi),
            Stage("second", D_spec, ModifyingFactors.from_tuple(
                "0", "2", "-1", "-x-1", "(x-1)/2", "rho/2"), psi),
        ),
        links=(
            Link("F(x) D(x)", F_spec, D_spec, f"-(x+1)*({phi})",
                 outer_offset="-b0x-w1", definitions=defs),
            Link("F(x+2) D(x)", F_spec, D_spec, f"(x+1)*({psi})", shift=2,
                 outer_offset="b0x+w1+2*sigma", inner_offset="-(x+1)", definitions=defs),
        ),
        recurrence=Recurrence(
            F_spec,
            "(x+1+alpha)*(x+1-alpha-beta)*(x+1+beta)/((x+1-alpha)*(x+1+alpha+beta)*(x+1-beta))",
            2, defs, transform=_q_transform, transform_label="(F - sigma)/(F + sigma)",
        ),
        even_form=EvenForm("rhs", "pq", "1/(2*m-1)"),
        domain=lambda env: env["x"] > 0 or any(_even_int(v) for v in (env["alpha"], env["beta"], env["alpha"] + env["beta"])),
        domain_text="x > 0, or alpha, beta or alpha + beta an even integer",
        grid=_ab_grid(),
    )


# ---------------------------------------------------------------------------
# specializations
# ---------------------------------------------------------------------------

X_ONLY = ("x",)


def _positive_x(env):
    return env["x"] > 0


def _make_cor1():
    rhs = _spec(X_ONLY, "0",
                [("2*(3*m-2)*(3*m-1)^2/(27*(2*m-1))", "x^2-1/9"), ("2*(3*m-1)*(3*m-2)^2/(27*(2*m-1))", "1")],
                head=(("2", "(x^2-1/9)/2"),))
    nu = _spec(X_ONLY, "0",
               [("2*(3*m-2)^3/(27*(2*m-1))", "x^2-1"), ("2*(3*m-1)^3/(27*(2*m-1))", "1")],
               head=(("2", "(x^2-1)/2"),))
    return TheoremFixture(
        id="cor1", kind="corollary", parameters=X_ONLY,
        lhs=GammaRatioSpec.build(num=(("1/3", 3),), den=(("5/3", 3),)),
        rhs=rhs, forms={"nu": nu}, domain=_positive_x, grid=_x_grid(),
    )


def _make_cor2():
    rhs = _spec(X_ONLY, "0",
                [("2*(3*m-1)^3/(27*(2*m-1))", "x"), ("2*(3*m-2)^3/(27*(2*m-1))", "x")],
                head=(("1", "x/2"),))
    return TheoremFixture(
        id="cor2", kind="corollary", parameters=X_ONLY,
        lhs=GammaRatioSpec.build(num=(("2/3", 3),), den=(("4/3", 3),)),
        rhs=rhs, domain=_positive_x, grid=_x_grid(),
    )


COR3_KAPPA_EVEN = "(m-alpha-2/3)*(2*m-alpha-2/3)^2/(2*(2*m-1))"
COR3_KAPPA_ODD = "(m+alpha-1/3)*(2*m+alpha-4/3)^2/(2*(2*m-1))"
COR3_GRID = tuple({"x": x, "alpha": a} for x, a in zip(X_POINTS, (F(1, 3), F(1, 2), F(1, 5))))


def _cor3_domain(env):
    a = env["alpha"]
    return env["x"] > -(2 * a + F(1, 3)) or (_is_int(a + F(2, 3)) and a + F(2, 3) > 0) \
        or (_is_int(F(1, 3) - a) and F(1, 3) - a > 0)


def _make_cor3(which):
    params = ("x", "alpha")
    shifted = "x-2*(2*alpha+1/3)"
    if which == "a":
        cases = [(COR3_KAPPA_EVEN, shifted), (COR3_KAPPA_ODD, "x")]
        head = (("1", f"({shifted})/2"),)
        lhs = GammaRatioSpec.build(num=(("-3*alpha", 2), "2"), den=(("4/3-alpha", 2), "4/3-4*alpha"))
    else:
        cases = [(COR3_KAPPA_EVEN, "x"), (COR3_KAPPA_ODD, shifted)]
        head = (("1", "x/2"),)
        lhs = GammaRatioSpec.build(num=(("-3*alpha", 2), "0"), den=(("4/3-alpha", 2), "-2/3-4*alpha"))
    return TheoremFixture(
        id=f"cor3{which}", kind="corollary", parameters=params,
        lhs=lhs, rhs=_spec(params, "0", cases, head=head),
        domain=_cor3_domain,
        domain_text="x > -(2 alpha + 1/3), or alpha + 2/3 or 1/3 - alpha a positive integer",
        grid=COR3_GRID,
        notes="left side obtained by setting alpha = beta = alpha + 2/3 in the parent identity",
    )


def _make_bauer():
    rhs = _spec(X_ONLY, "0", [("(2*m-1)^2", "2*x")], head=(("4", "x"),))
    return TheoremFixture(
        id="bauer1872", kind="remark", parameters=X_ONLY,
        lhs=GammaRatioSpec.build(num=(("1", 2),), den=(("3", 2),), scale=F(1, 4)),
        rhs=rhs, domain=_positive_x,
        grid=({"x": F(1)}, {"x": F(5, 2)}, {"x": F(7)}),
    )


# ---------------------------------------------------------------------------
# open identities
# ---------------------------------------------------------------------------

CONJ_KAPPA_EVEN = "((2*m)^2-(alpha+beta)^2)/4"
CONJ_KAPPA_ODD = "((2*m-1)^2-alpha^2)*((2*m-1)^2-beta^2)/(4*(2*m-1)^2)"


def _make_conj(which):
    # the two identities differ in the sign of the leading numerator and of every lambda
    s = "" if which == 1 else "-"
    t = "-" if which == 1 else ""
    rhs = _spec(AB, "0", [(CONJ_KAPPA_EVEN, f"x+({t}alpha*beta/(2*(2*m+1)))"),
                          (CONJ_KAPPA_ODD, f"x+({s}alpha*beta/(2*(2*m-1)))")],
                head=((f"{s}(alpha+beta)/2", f"x+({t}alpha*beta/2)"),))
    if which == 1:
        lhs = GammaRatioSpec.build(num=("3/2-alpha", "1/2+alpha+beta", "3/2-beta"),
                                   den=("3/2+alpha", "1/2-alpha-beta", "3/2+beta"))
    else:
        lhs = GammaRatioSpec.build(num=("1/2-alpha", "3/2+alpha+beta", "1/2-beta"),
                                   den=("1/2+alpha", "3/2-alpha-beta", "1/2+beta"))
    return TheoremFixture(
        id=f"conj{which}", kind="conjecture", parameters=AB,
        lhs=lhs, lhs_map="moebius", rhs=rhs,
        domain=_t1_domain, domain_text=T1_DOMAIN_TEXT, grid=_ab_grid(),
    )


LNE = ("x", "l", "n", "eta")
CONJ3_GRID = (
    {"x": F(5, 2), "l": F(1, 3), "n": F(1, 5), "eta": F(1, 7)},
    {"x": F(3), "l": F(1, 2), "n": F(1, 4), "eta": F(0)},
    {"x": F(7), "l": F(1, 3), "n": F(1, 5), "eta": F(1, 7)},
)


def _conj3_lhs(with_eta=True):
    e = "eta" if with_eta else "0"
    return GammaRatioSpec.build(
        num=(f"l+n+{e}+1", f"l-n-{e}+1", f"-l+n-{e}+3", f"-l-n+{e}+3"),
        den=(f"l+n-{e}+3", f"l-n+{e}+3", f"-l+n+{e}+1", f"-l-n-{e}+1"),
        scale=F(1, 4),
    )


def _make_conj3():
    rhs = _spec(LNE, "0",
                [("(2*m)^2-l^2", "x-n*eta/(2*m+1)"),
                 ("((2*m-1)^2-n^2)*((2*m-1)^2-eta^2)/(2*m-1)^2", "x+n*eta/(2*m-1)")],
                head=(("l", "x-n*eta"),))
    return TheoremFixture(
        id="conj3", kind="conjecture", parameters=LNE,
        lhs=_conj3_lhs(), lhs_map="moebius", rhs=rhs,
        domain=lambda env: env["x"] > 0 or _odd_int(env["n"]) or _odd_int(env["eta"]) or _even_int(env["l"]),
        domain_text="x > 0, or n or eta an odd integer, or l an even integer",
        grid=CONJ3_GRID,
    )


def _make_entry34():
    params = ("x", "l", "n")
    rhs = _spec(params, "0", [("(2*m)^2-l^2", "x"), ("(2*m-1)^2-n^2", "x")], head=(("l", "x"),))
    return TheoremFixture(
        id="entry34", kind="helper", parameters=params,
        lhs=_conj3_lhs(with_eta=False), lhs_map="moebius", rhs=rhs,
        domain=_positive_x,
        grid=tuple({k: v for k, v in g.items() if k != "eta"} for g in CONJ3_GRID),
        notes="four-gamma specialization at eta = 0 written independently",
    )


def _make_exploratory(j):
    defs = (("sigma", "alpha*beta*(alpha+beta)/4"),)
    if j == 1:
        b0 = "x^2-(1-alpha)^2-sigma"
        cases = [("(2*m+alpha)*(2*m+alpha+beta)*(2*m-beta)/4", "(2*m+1)*(x^2-(1-alpha)^2)"),
                 ("(2*m-alpha)*(2*m-alpha-beta)*(2*m+beta)/4", "1")]
    else:
        b0 = "x^2-(1-alpha-beta)^2+sigma"
        cases = [("(2*m+alpha)*(2*m+alpha+beta)*(2*m+beta)/4", "(2*m+1)*(x^2-(1-alpha-beta)^2)"),
                 ("(2*m-alpha)*(2*m-alpha-beta)*(2*m-beta)/4", "1")]
    t5 = _make_theorem5()
    return TheoremFixture(
        id=f"f{j}", kind="exploratory", parameters=AB,
        lhs=None, rhs=_spec(AB, b0, cases, definitions=defs),
        forms={"theorem5-F": t5.forms["F"]}, compare="theorem5-F",
        domain=_positive_x, grid=_ab_grid(),
        notes="evaluation only: compared with the fraction F of theorem5, no identity is claimed",
    )


def _build():
    items = [
        _make_theorem1_j1(), _make_theorem1_j2(), _make_theorem1_j3(),
        _make_theorem2(), _make_theorem3(), _make_theorem4(), _make_theorem5(),
        _make_cor1(), _make_cor2(), _make_cor3("a"), _make_cor3("b"), _make_bauer(),
        _make_conj(1), _make_conj(2), _make_conj3(),
        _make_entry34(), _make_exploratory(1), _make_exploratory(2),
    ]
    return {f.id: f for f in items}


FIXTURES = _build()

DEFAULT_SUITE = (
    "theorem1-j1", "theorem1-j2", "theorem1-j3", "theorem2", "theorem3", "theorem4", "theorem5",
    "cor1", "cor2", "cor3a", "cor3b", "bauer1872", "conj1", "conj2", "conj3",
)
CONJECTURE_IDS = ("conj1", "conj2", "conj3")
THEOREM_IDS = DEFAULT_SUITE[:7]


def get_fixture(fixture_id: str) -> TheoremFixture:
    try:
        return FIXTURES[fixture_id]
    except KeyError:
        known = ", ".join(sorted(FIXTURES))
        raise ConfigError(f"unknown fixture {fixture_id!r}; known: {known}") from None


def grid_points(fixture: TheoremFixture, grid: str = "default") -> tuple:
    """Binding points for ``grid`` = ``default`` (three points) or ``full``."""
    if grid == "default":
        return fixture.grid
    if grid == "full":
        if fixture.parameters == AB:
            return _ab_full()
        if fixture.parameters == X_ONLY and fixture.id != "bauer1872":
            return tuple({"x": x} for x in X_FULL)
        return fixture.grid
    raise ConfigError(f"unknown grid {grid!r}; use 'default' or 'full'")
