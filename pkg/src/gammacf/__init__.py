"""Continued fraction representations of gamma-function ratios.

Exact and high-precision evaluation of continued fractions, Bauer-Muir
transformations with modifying factors, asymptotic series tools, a
multiple-correction search for new fractions, a log-gamma oracle and a
catalog of identities with a verifier.
"""
from .bauer_muir import (
    ModifyingFactors,
    adjoint_factors,
    bauer_muir_transform,
    solve_modifying_factors,
    verify_constancy,
)
from .cf import (
    CFSpec,
    CoefficientRule,
    Template,
    approximant_pair,
    approximant_values,
    bind_cf,
    equivalence_transform,
    evaluate,
    even_part,
    modified_approximant,
)
from .errors import GammaCFError
from .fixtures import FIXTURES, get_fixture
from .gamma import GammaRatioSpec, lhs_value, log_gamma
from .mc import ShiftRatioTarget, discover, discover_rule, fit_coefficient_rule, moebius_wrap
from .scalar import BigFloat, Poly, RationalFunction
from .series import Series1OverX, mortici_rate, rate_from_series, series_from_rational, series_log
from .verify import run_case, run_suite, structure_checks

__version__ = "0.1.0"

__all__ = [
    "BigFloat",
    "CFSpec",
    "CoefficientRule",
    "FIXTURES",
    "GammaCFError",
    "GammaRatioSpec",
    "ModifyingFactors",
    "Poly",
    "RationalFunction",
    "Series1OverX",
    "ShiftRatioTarget",
    "Template",
    "adjoint_factors",
    "approximant_pair",
    "approximant_values",
    "bauer_muir_transform",
    "bind_cf",
    "discover",
    "discover_rule",
    "equivalence_transform",
    "evaluate",
    "even_part",
    "fit_coefficient_rule",
    "get_fixture",
    "lhs_value",
    "log_gamma",
    "modified_approximant",
    "moebius_wrap",
    "mortici_rate",
    "rate_from_series",
    "run_case",
    "run_suite",
    "series_from_rational",
    "series_log",
    "solve_modifying_factors",
    "structure_checks",
    "verify_constancy",
]
