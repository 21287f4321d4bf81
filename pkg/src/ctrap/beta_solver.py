"""Solve for the optimal constant beta_q.

``beta_q > 1`` is the root of ``K(q, beta) = B(q, 1/2) / 2``.  The endpoint
regimes and ``q = 2`` come from a table; everything else is found by
bisection on the bracket ``[sqrt(2), 2]`` followed by Newton polishing.
Integer ``q`` can also be solved through the equivalent polynomial.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .quadcore import BetaSolution
from .special_fn import kernel_derivative, kernel_integral, rhs_half_beta

EXACT = "exact-table"
POLYNOMIAL = "polynomial-root"
NUMERIC = "numeric-root"

SQRT2 = math.sqrt(2.0)

# q -> (beta, beta**2 held exactly)
_TABLE = {
    1.0: (2.0, 4.0),
    2.0: (math.sqrt(3.0), 3.0),
    math.inf: (SQRT2, 2.0),
}

_BISECT_WIDTH = 1e-13
_NEWTON_STEPS = 3


@dataclass(frozen=True)
class BetaPolynomial:
    """The beta equation for integer ``q`` as a polynomial in beta.

    ``exact`` and ``coefficients`` are in ascending powers of beta (degree
    ``2q - 1``).  For even ``q`` the constant term vanishes and, after
    dividing by beta, only even powers remain; ``reduced`` holds those in
    ascending powers of ``beta**2`` (degree ``q - 1``).
    """

    q: int
    exact: tuple
    coefficients: tuple
    reduced: Optional[tuple] = None

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, beta: float) -> float:
        return _horner(self.coefficients, beta)

    def evaluate_reduced(self, beta: float) -> float:
        if self.reduced is None:
            raise ValueError("only even q has a reduced polynomial")
        return _horner(self.reduced, beta * beta)


def _horner(coefs, x):
    acc = 0.0
    for c in reversed(coefs):
        acc = acc * x + c
    return acc


def beta_polynomial(q: int) -> BetaPolynomial:
    """Expand the beta equation for integer ``2 <= q <= 30`` by the binomial theorem."""
    if isinstance(q, float) and q.is_integer():
        q = int(q)
    if not isinstance(q, int) or not 2 <= q <= 30:
        raise ValueError(f"beta_polynomial needs an integer 2 <= q <= 30, got {q!r}")
    m = q - 1
    coefs = [Fraction(0)] * (2 * q)
    rhs = Fraction(0)
    for k in range(q):
        c = Fraction(math.comb(m, k), 2 * k + 1)
        coefs[2 * k + 1] = c * (-1) ** (m + k)
        coefs[0] -= c * (-1) ** (m + k)  # the "-1" inside [beta^(2k+1) - 1]
        rhs += c * (-1) ** k
    coefs[0] -= rhs
    exact = tuple(coefs)
    reduced = None
    if q % 2 == 0:
        assert coefs[0] == 0
        reduced = tuple(float(-c) for c in coefs[1::2])
    return BetaPolynomial(q, exact, tuple(float(c) for c in exact), reduced)


def series_check(q: int, beta: float) -> float:
    """Residual of the central-binomial series form of the beta equation."""
    u = (beta * beta - 1.0) / 4.0
    total = 0.0
    for k in range(int(q)):
        total += (-1) ** k * math.comb(2 * k, k) * u**k
    return beta * total - (1 - (-1) ** int(q))


def beta_residual(q: float, beta: float) -> float:
    """``K(q, beta) - B(q, 1/2)/2``; negative below beta_q, positive above."""
    return kernel_integral(q, beta) - rhs_half_beta(q)


def _bracket(h, lo, hi):
    flo, fhi = h(lo), h(hi)
    if flo <= 0.0 <= fhi:
        return lo, hi, flo, fhi
    lo, hi = 1.0 + 1e-9, 2.0 + 1e-9
    flo, fhi = h(lo), h(hi)
    if flo <= 0.0 <= fhi:
        return lo, hi, flo, fhi
    raise ArithmeticError("beta equation residual does not change sign on the bracket")


def _bisect_then_newton(h, dh, lo=SQRT2, hi=2.0):
    lo, hi, flo, _ = _bracket(h, lo, hi)
    if flo == 0.0:
        return lo
    while hi - lo > _BISECT_WIDTH:
        mid = 0.5 * (lo + hi)
        fm = h(mid)
        if fm == 0.0:
            return mid
        if fm < 0.0:
            lo = mid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    for _ in range(_NEWTON_STEPS):
        d = dh(x)
        if d <= 0.0:
            break
        step = h(x) / d
        nx = x - step
        if not lo - _BISECT_WIDTH <= nx <= hi + _BISECT_WIDTH:
            break
        x = nx
    return x


_cache: dict = {}
_cache_lock = threading.Lock()


def solve_beta(q: float, method: Optional[str] = None) -> BetaSolution:
    """beta_q for ``q`` in ``[1, inf]``.

    ``method`` may force :data:`NUMERIC` or :data:`POLYNOMIAL` (integer q only);
    by default table entries are used where they exist.
    """
    q = float(q)
    if math.isnan(q) or q < 1:
        raise ValueError(f"solve_beta needs q >= 1, got {q}")
    key = (q, method)
    with _cache_lock:
        hit = _cache.get(key)
    if hit is not None:
        return hit
    sol = _solve(q, method)
    with _cache_lock:
        _cache.setdefault(key, sol)
    return sol


def _solve(q, method):
    if method is None and q in _TABLE:
        beta, beta_sq = _TABLE[q]
        return BetaSolution(q, beta, EXACT, 0.0, beta_sq)
    if q == 1.0 or q == math.inf:
        raise ValueError(f"q = {q} is only available from the exact table")
    if method == POLYNOMIAL:
        poly = beta_polynomial(q)
        # the polynomial is K(q, beta) - rhs written out term by term
        deriv = [i * c for i, c in enumerate(poly.coefficients)][1:]
        beta = _bisect_then_newton(poly, lambda b: _horner(deriv, b))
    elif method in (None, NUMERIC):
        method = NUMERIC
        rhs = rhs_half_beta(q)
        beta = _bisect_then_newton(
            lambda b: kernel_integral(q, b) - rhs,
            lambda b: kernel_derivative(q, b),
        )
    else:
        raise ValueError(f"unknown solve method {method!r}")
    return BetaSolution(q, beta, method, beta_residual(q, beta))
