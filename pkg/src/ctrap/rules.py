"""Single-panel and composite corrected trapezoidal rules."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .beta_solver import solve_beta
from .quadcore import (
    ConjugatePair,
    Interval,
    QuadResult,
    Regime,
    RuleSpec,
    conjugate,
    correction_coefficient,
)

Evaluator = Callable[[np.ndarray], np.ndarray]

PRESETS = (
    "trapezoid",
    "optimal-p",
    "fallback-a",
    "fallback-b",
    "fallback-c",
    "cubic-exact",
    "alexiewicz",
)


class MissingDerivativeError(ValueError):
    """A corrected rule needs f'(a) and f'(b) but none were supplied."""


@dataclass(frozen=True)
class FunctionModel:
    """``f`` with optional first and second derivatives.

    Evaluators take and return numpy arrays (elementwise).  ``breakpoints``
    lists interior points where ``f''`` may be non-smooth; the oracle
    integrator aligns its panels with them.
    """

    f: Evaluator
    fprime: Optional[Evaluator] = None
    fsecond: Optional[Evaluator] = None
    label: str = ""
    breakpoints: tuple = field(default=())

    def __call__(self, x):
        return self.f(x)


@dataclass(frozen=True)
class SampledFunction:
    """Values of ``f`` on the uniform nodes ``a + (b - a) i / n``."""

    interval: Interval
    values: tuple
    fprime_a: Optional[float] = None
    fprime_b: Optional[float] = None

    def __post_init__(self):
        if len(self.values) < 2:
            raise ValueError("a sampled function needs at least two values")
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))

    @property
    def n(self) -> int:
        return len(self.values) - 1

    def nodes(self) -> np.ndarray:
        return uniform_nodes(self.interval, self.n)


def uniform_nodes(iv: Interval, n: int) -> np.ndarray:
    i = np.arange(n + 1, dtype=float)
    x = iv.a + (iv.b - iv.a) * i / n
    x[-1] = iv.b
    return x


def preset(name: str, p: Optional[float] = None) -> RuleSpec:
    """Build a named rule; ``optimal-p`` needs the exponent ``p``."""
    if name == "trapezoid":
        return RuleSpec("trapezoid", 0.0)
    if name == "alexiewicz":
        return RuleSpec("alexiewicz", 0.0, ConjugatePair.alexiewicz())
    if name == "fallback-a":
        return RuleSpec("fallback-a", 1 / 16)
    if name in ("fallback-b", "cubic-exact"):
        return RuleSpec(name, 1 / 12)
    if name == "fallback-c":
        return RuleSpec("fallback-c", 1 / 8)
    if name == "optimal-p":
        if p is None:
            raise ValueError("preset 'optimal-p' needs an exponent p")
        return optimal_rule(conjugate(p))
    raise ValueError(f"unknown preset {name!r}; expected one of {', '.join(PRESETS)}")


def optimal_rule(pair: ConjugatePair) -> RuleSpec:
    if pair.regime is Regime.ALEXIEWICZ:
        return preset("alexiewicz")
    return RuleSpec("optimal", solve_beta(pair.q).k_unit, pair)


def _endpoint_derivatives(src, iv, fprime_a, fprime_b):
    if fprime_a is not None and fprime_b is not None:
        return float(fprime_a), float(fprime_b)
    if isinstance(src, SampledFunction):
        if src.fprime_a is not None and src.fprime_b is not None:
            return src.fprime_a, src.fprime_b
        raise MissingDerivativeError(
            "corrected rules need f'(a) and f'(b); supply them with the samples "
            "or estimate them with endpoint_derivatives_fd()"
        )
    if src.fprime is None:
        raise MissingDerivativeError(
            "corrected rules need f'(a) and f'(b); the function model has no derivative"
        )
    d = np.asarray(src.fprime(np.array([iv.a, iv.b])), dtype=float)
    return float(d[0]), float(d[1])


def composite(
    src: Union[FunctionModel, SampledFunction],
    iv: Optional[Interval] = None,
    n: Optional[int] = None,
    spec: RuleSpec = None,
    *,
    fprime_a: Optional[float] = None,
    fprime_b: Optional[float] = None,
    norm: Optional[float] = None,
    regime: Optional[ConjugatePair] = None,
) -> QuadResult:
    """Composite rule on ``n`` uniform panels.

    Only the outer endpoint derivatives appear; the interior ones cancel
    between neighbouring panels.  When ``norm`` (a norm of ``f''``) is given
    the a-priori bound is attached, measured in ``regime`` (default: the
    rule's own regime).
    """
    if spec is None:
        raise ValueError("a rule spec is required")
    if isinstance(src, SampledFunction):
        if iv is not None and iv != src.interval:
            raise ValueError("interval does not match the sampled function")
        if n is not None and n != src.n:
            raise ValueError(f"samples define n = {src.n} panels, got n = {n}")
        iv, n = src.interval, src.n
        vals = np.asarray(src.values, dtype=float)
    else:
        if iv is None or n is None:
            raise ValueError("interval and n are required for a function model")
        if not isinstance(n, (int, np.integer)) or n < 1:
            raise ValueError(f"n must be a positive integer, got {n!r}")
        vals = np.asarray(src.f(uniform_nodes(iv, n)), dtype=float)

    width = iv.b - iv.a
    interior = float(np.sum(vals[1:-1])) if n > 1 else 0.0
    estimate = width / (2 * n) * (vals[0] + 2.0 * interior + vals[-1])
    if spec.k_unit != 0.0:
        da, db = _endpoint_derivatives(src, iv, fprime_a, fprime_b)
        estimate += correction_coefficient(spec, iv) / n**2 * (da - db)

    bound = None
    if norm is not None:
        from .bounds import rule_bound

        bound = rule_bound(spec, norm, iv, n, regime).bound
    return QuadResult(float(estimate), int(n), spec, bound)


def single_panel(model: FunctionModel, iv: Interval, spec: RuleSpec, **kwargs) -> QuadResult:
    """One-panel rule ``(b-a)/2 [f(a)+f(b)] + k [f'(a)-f'(b)]``."""
    return composite(model, iv, 1, spec, **kwargs)


def panelwise_sum(model: FunctionModel, iv: Interval, n: int, spec: RuleSpec) -> float:
    """Sum of ``n`` independent single panels, interior derivative terms included.

    Mathematically equal to :func:`composite`; kept for checking the
    telescoping of the derivative terms.
    """
    x = uniform_nodes(iv, n)
    total = 0.0
    for left, right in zip(x[:-1], x[1:]):
        total += single_panel(model, Interval(float(left), float(right)), spec).estimate
    return total


def endpoint_derivatives_fd(samples: SampledFunction) -> tuple:
    """One-sided second-order differences for ``f'(a)`` and ``f'(b)``.

    The error is O(h^2) and is not covered by any of the a-priori bounds,
    which assume exact endpoint derivatives.
    """
    v = samples.values
    if len(v) < 3:
        raise ValueError("finite-difference endpoint derivatives need at least 3 samples")
    h = samples.interval.width / samples.n
    da = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2 * h)
    db = (3.0 * v[-1] - 4.0 * v[-2] + v[-3]) / (2 * h)
    return da, db


def with_fd_derivatives(samples: SampledFunction) -> SampledFunction:
    da, db = endpoint_derivatives_fd(samples)
    return SampledFunction(samples.interval, samples.values, da, db)
