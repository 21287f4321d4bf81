"""A-priori error bounds for the trapezoidal and corrected rules.

Every bound has the form ``constant_unit * norm * (b - a)**power / n**n_exponent``
where ``norm`` is a norm of ``f''``.  The report keeps the pieces separate so
the constants can be checked without estimating any norm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .beta_solver import solve_beta
from .quadcore import ConjugatePair, Interval, Regime, RuleSpec, conjugate
from .special_fn import log_beta

_LOG_SPACE_Q = 50.0


@dataclass(frozen=True)
class BoundReport:
    regime: ConjugatePair
    rule: Optional[RuleSpec]
    norm_value: float
    n: int
    bound: float
    constant_unit: float
    power: float
    n_exponent: int = 2


def _report(regime, rule, norm_value, iv, n, constant, power, n_exponent=2):
    if not norm_value >= 0:
        raise ValueError(f"norm must be nonnegative, got {norm_value}")
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    bound = constant * norm_value * (iv.b - iv.a) ** power / n**n_exponent
    return BoundReport(regime, rule, float(norm_value), n, bound, constant, power, n_exponent)


def _lebesgue(regime: ConjugatePair) -> ConjugatePair:
    if regime.regime is Regime.ALEXIEWICZ:
        raise ValueError("the Alexiewicz regime has its own bounds; use hk_bound")
    return regime


def trap_constant(regime: ConjugatePair) -> tuple:
    """``(constant_unit, power)`` for the plain trapezoidal rule."""
    regime = _lebesgue(regime)
    if regime.regime is Regime.L1:
        return 1 / 8, 2.0
    if regime.regime is Regime.LINF:
        return 1 / 12, 3.0
    q = regime.q
    return math.exp(log_beta(q + 1, q + 1) / q) / 2, 2 + 1 / q


def fallback_c_constant(q: float) -> float:
    """``1 / (2^(3+1/q) (q+1/2)^(1/q))``: the coefficient for ``phi = (x-c)^2``."""
    if q > _LOG_SPACE_Q:
        return math.exp(-(3 + 1 / q) * math.log(2.0) - math.log(q + 0.5) / q)
    return 1 / (2 ** (3 + 1 / q) * (q + 0.5) ** (1 / q))


def optimal_constant(regime: ConjugatePair) -> tuple:
    """``(constant_unit, power)`` for the optimal corrected rule."""
    regime = _lebesgue(regime)
    if regime.regime is Regime.L1:
        return 1 / 16, 2.0
    if regime.regime is Regime.LINF:
        return 1 / 32, 3.0
    q = regime.q
    shrink = 8 * solve_beta(q).k_unit  # 1 - beta_q^-2
    if q > _LOG_SPACE_Q:
        return math.exp(math.log(shrink) + math.log(fallback_c_constant(q))), 2 + 1 / q
    return shrink * fallback_c_constant(q), 2 + 1 / q


def trap_bound(regime: ConjugatePair, norm_value: float, iv: Interval, n: int = 1) -> BoundReport:
    from .rules import preset

    c, power = trap_constant(regime)
    return _report(regime, preset("trapezoid"), norm_value, iv, n, c, power)


def optimal_bound(regime: ConjugatePair, norm_value: float, iv: Interval) -> BoundReport:
    return composite_bound(regime, norm_value, iv, 1)


def composite_bound(regime: ConjugatePair, norm_value: float, iv: Interval, n: int) -> BoundReport:
    """Bound for the optimal rule of ``regime`` on ``n`` panels."""
    from .rules import optimal_rule

    if regime.regime is Regime.ALEXIEWICZ:
        return hk_bound(norm_value, iv, star=False, n=n)
    c, power = optimal_constant(regime)
    return _report(regime, optimal_rule(regime), norm_value, iv, n, c, power)


_FALLBACK_RANGES = {
    "a": (lambda p: 1 <= p < 2, "1 <= p < 2"),
    "b": (lambda p: 2 <= p < math.inf, "2 <= p < inf"),
    "c": (lambda p: 1 < p < math.inf, "1 < p < inf"),
}


def fallback_bound(
    variant: str, regime: ConjugatePair, norm_value: float, iv: Interval, n: int = 1
) -> BoundReport:
    """Bounds for the fixed-coefficient rules usable when beta_q is unknown.

    The norm expected is ``||f''||_1`` for (a), ``||f''||_2`` for (b) and
    ``||f''||_p`` for (c).
    """
    from .rules import preset

    if variant not in _FALLBACK_RANGES:
        raise ValueError(f"fallback variant must be 'a', 'b' or 'c', got {variant!r}")
    ok, text = _FALLBACK_RANGES[variant]
    regime = _lebesgue(regime)
    if not ok(regime.p):
        raise ValueError(f"fallback ({variant}) needs {text}, got {regime.label()}")
    if variant == "a":
        c, power = 1 / 16, 2.0
    elif variant == "b":
        c, power = 1 / (12 * math.sqrt(5)), 2.5
    else:
        q = regime.q
        c, power = fallback_c_constant(q), 2 + 1 / q
    return _report(regime, preset(f"fallback-{variant}"), norm_value, iv, n, c, power)


def hk_bound(norm_alexiewicz: float, iv: Interval, star: bool = False, n: int = 1) -> BoundReport:
    """Trapezoid bound from the Alexiewicz norm of ``f''``.

    ``star=True`` takes the subinterval-supremum norm and halves the
    constant; that form is stated for a single panel only.
    """
    from .rules import preset

    if star and n != 1:
        raise ValueError("the starred-norm bound is for a single panel")
    c = 1 / 8 if star else 1 / 4
    return _report(
        ConjugatePair.alexiewicz(), preset("alexiewicz"), norm_alexiewicz, iv, n, c, 2.0, n_exponent=1
    )


def rule_bound(
    spec: RuleSpec, norm_value: float, iv: Interval, n: int = 1, regime: Optional[ConjugatePair] = None
) -> BoundReport:
    """The bound matching ``spec`` with ``norm_value`` measured in ``regime``."""
    kind = spec.kind
    if kind == "alexiewicz" or (regime is not None and regime.regime is Regime.ALEXIEWICZ):
        if spec.k_unit != 0.0:
            raise ValueError("Alexiewicz-norm bounds only cover the plain trapezoidal rule")
        return hk_bound(norm_value, iv, star=False, n=n)
    if kind == "optimal":
        if regime is not None and regime != spec.pair:
            raise ValueError(f"{spec.name} is bounded in its own regime, not {regime.label()}")
        return composite_bound(spec.pair, norm_value, iv, n)
    if kind == "cubic-exact":
        if regime is not None and regime != conjugate(2):
            raise ValueError(f"{spec.name} is bounded with ||f''||_2, not in {regime.label()}")
        return composite_bound(conjugate(2), norm_value, iv, n)
    if kind == "trapezoid":
        if regime is None:
            raise ValueError("the trapezoid bound needs a regime")
        return trap_bound(regime, norm_value, iv, n)
    variant = kind.rsplit("-", 1)[1]
    default = {"a": conjugate(1), "b": conjugate(2), "c": None}[variant]
    regime = regime or default
    if regime is None:
        raise ValueError("fallback-c bounds need a regime 1 < p < inf")
    return fallback_bound(variant, regime, norm_value, iv, n)
