"""Corrected trapezoidal rules with optimal endpoint-derivative coefficients."""

from .beta_solver import beta_polynomial, beta_residual, series_check, solve_beta
from .bounds import (
    BoundReport,
    composite_bound,
    fallback_bound,
    hk_bound,
    optimal_bound,
    rule_bound,
    trap_bound,
)
from .exprparse import EvalError, ParseError, ParsedFunction, differentiate, evaluate, parse
from .norms import alexiewicz_norm, lp_norm, reference_integral
from .quadcore import (
    BetaSolution,
    ConjugatePair,
    Interval,
    QuadResult,
    Regime,
    RuleSpec,
    alpha_from_beta,
    conjugate,
)
from .rules import (
    FunctionModel,
    MissingDerivativeError,
    SampledFunction,
    composite,
    optimal_rule,
    preset,
    single_panel,
)
from .special_fn import beta_fn, kernel_integral, log_beta, log_gamma

__version__ = "0.1.0"

__all__ = [
    "BetaSolution",
    "BoundReport",
    "ConjugatePair",
    "EvalError",
    "FunctionModel",
    "Interval",
    "MissingDerivativeError",
    "ParseError",
    "ParsedFunction",
    "QuadResult",
    "Regime",
    "RuleSpec",
    "SampledFunction",
    "alexiewicz_norm",
    "alpha_from_beta",
    "beta_fn",
    "beta_polynomial",
    "beta_residual",
    "composite",
    "composite_bound",
    "conjugate",
    "differentiate",
    "evaluate",
    "fallback_bound",
    "hk_bound",
    "kernel_integral",
    "log_beta",
    "log_gamma",
    "lp_norm",
    "optimal_bound",
    "optimal_rule",
    "parse",
    "preset",
    "reference_integral",
    "rule_bound",
    "series_check",
    "single_panel",
    "solve_beta",
    "trap_bound",
]
