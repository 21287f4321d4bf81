"""Core value types shared by the rule, bound and verification modules.

Exponents are modelled as a :class:`Regime` plus a finite ``p``/``q`` only
when both are finite, so code can dispatch on the regime without ever doing
arithmetic on an IEEE infinity.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional


class Regime(enum.Enum):
    LP = "Lp"
    L1 = "L1"
    LINF = "LInfinity"
    ALEXIEWICZ = "Alexiewicz"


@dataclass(frozen=True)
class Interval:
    a: float
    b: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise ValueError(f"interval endpoints must be finite, got [{self.a}, {self.b}]")
        if not self.a < self.b:
            raise ValueError(f"interval requires a < b, got [{self.a}, {self.b}]")

    @property
    def width(self) -> float:
        return self.b - self.a

    @property
    def half_width(self) -> float:
        return (self.b - self.a) / 2

    def midpoint(self) -> float:
        return (self.a + self.b) / 2

    def scaled(self, lam: float) -> "Interval":
        """The interval ``[lam*a, lam*b]``."""
        return Interval(lam * self.a, lam * self.b)


@dataclass(frozen=True)
class ConjugatePair:
    """A Hölder pair ``(p, q)`` or the Alexiewicz regime.

    ``p`` and ``q`` are stored only for the :attr:`Regime.LP` variant; the
    properties below report ``math.inf`` for the endpoint regimes so callers
    can print them, but formulas should branch on :attr:`regime`.
    """

    regime: Regime
    p_finite: Optional[float] = None
    q_finite: Optional[float] = None

    @classmethod
    def alexiewicz(cls) -> "ConjugatePair":
        return cls(Regime.ALEXIEWICZ)

    @property
    def p(self) -> float:
        if self.regime is Regime.LP:
            return self.p_finite
        if self.regime is Regime.L1:
            return 1.0
        if self.regime is Regime.LINF:
            return math.inf
        raise ValueError("the Alexiewicz regime has no Lebesgue exponent")

    @property
    def q(self) -> float:
        if self.regime is Regime.LP:
            return self.q_finite
        if self.regime is Regime.L1:
            return math.inf
        if self.regime is Regime.LINF:
            return 1.0
        raise ValueError("the Alexiewicz regime has no conjugate exponent")

    @property
    def is_lebesgue(self) -> bool:
        return self.regime is not Regime.ALEXIEWICZ

    def label(self) -> str:
        if self.regime is Regime.ALEXIEWICZ:
            return "alexiewicz"
        return f"p={format_exponent(self.p)}"


def format_exponent(v: float) -> str:
    return "inf" if v == math.inf else f"{v:g}"


def parse_exponent(text: str) -> float:
    """Parse ``"inf"``, ``"4/3"`` or a plain real."""
    t = text.strip().lower()
    if t in ("inf", "infinity", "oo"):
        return math.inf
    if "/" in t:
        num, den = t.split("/", 1)
        return float(num) / float(den)
    return float(t)


def conjugate(p: float) -> ConjugatePair:
    """Return the Hölder pair for ``p`` in ``[1, inf]``."""
    if isinstance(p, str):
        p = parse_exponent(p)
    p = float(p)
    if math.isnan(p) or p < 1:
        raise ValueError(f"exponent p must satisfy p >= 1, got {p}")
    if p == math.inf:
        return ConjugatePair(Regime.LINF)
    if p == 1:
        return ConjugatePair(Regime.L1)
    return ConjugatePair(Regime.LP, p, p / (p - 1))


def pair_from_q(q: float) -> ConjugatePair:
    """The pair whose conjugate exponent is ``q``."""
    q = float(q)
    if math.isnan(q) or q < 1:
        raise ValueError(f"conjugate exponent q must satisfy q >= 1, got {q}")
    if q == 1:
        return ConjugatePair(Regime.LINF)
    if q == math.inf:
        return ConjugatePair(Regime.L1)
    return ConjugatePair(Regime.LP, q / (q - 1), q)


def alpha_from_beta(beta: float, iv: Interval) -> float:
    """Half-distance between the roots of the minimizing quadratic."""
    if not beta >= 1:
        raise ValueError(f"beta must be >= 1, got {beta}")
    return (iv.b - iv.a) / (2 * beta)


@dataclass(frozen=True)
class BetaSolution:
    q: float
    beta: float
    method: str  # "exact-table" | "polynomial-root" | "numeric-root"
    residual: float = 0.0
    beta_squared: Optional[float] = None

    def __post_init__(self):
        if self.beta_squared is None:
            object.__setattr__(self, "beta_squared", self.beta * self.beta)

    def alpha(self, iv: Interval) -> float:
        return alpha_from_beta(self.beta, iv)

    @property
    def k_unit(self) -> float:
        b2 = self.beta_squared
        # (1 - 1/b2)/8 written so table entries give 3/32, 1/12, 1/16 exactly
        return (b2 - 1) / (8 * b2)


RULE_KINDS = (
    "trapezoid",
    "optimal",
    "fallback-a",
    "fallback-b",
    "fallback-c",
    "cubic-exact",
    "alexiewicz",
)


@dataclass(frozen=True)
class RuleSpec:
    """A corrected trapezoidal rule, identified by its unit-interval coefficient.

    On ``[a, b]`` the rule adds ``k_unit * (b - a)**2 * (f'(a) - f'(b))`` to the
    plain trapezoid.
    """

    kind: str
    k_unit: float
    pair: Optional[ConjugatePair] = None

    def __post_init__(self):
        if self.kind not in RULE_KINDS:
            raise ValueError(f"unknown rule kind {self.kind!r}")
        if self.kind == "optimal" and (self.pair is None or not self.pair.is_lebesgue):
            raise ValueError("optimal rules need a Lebesgue conjugate pair")

    @property
    def name(self) -> str:
        if self.kind == "optimal":
            return f"optimal-p({format_exponent(self.pair.p)})"
        return self.kind


def correction_coefficient(spec: RuleSpec, iv: Interval) -> float:
    """Multiplier of ``f'(a) - f'(b)`` for ``spec`` on ``iv``."""
    return spec.k_unit * (iv.b - iv.a) ** 2


@dataclass(frozen=True)
class QuadResult:
    estimate: float
    n: int
    rule: RuleSpec
    bound: Optional[float] = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be a positive integer")
        if self.bound is not None and self.bound < 0:
            raise ValueError("error bound must be nonnegative")
