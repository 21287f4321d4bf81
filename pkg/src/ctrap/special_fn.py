"""Gamma/beta functions and the kernel integral ``K(q, beta)``.

``K(q, beta) = int_1^beta (x^2 - 1)^(q-1) dx`` is the left side of the
equation that fixes the optimal correction.  Integer ``q`` is evaluated in
closed form; other ``q`` go through adaptive Gauss-Legendre quadrature.
"""

from __future__ import annotations

import math

import numpy as np

from . import _gauss

CLOSED_FORM = "closed-form-integer-q"
ADAPTIVE = "adaptive-numeric"

_NEAR_INTEGER = 1e-9


def log_gamma(x: float) -> float:
    """Natural log of Gamma(x) for x > 0."""
    if not x > 0:
        raise ValueError(f"log_gamma needs x > 0, got {x}")
    return math.lgamma(x)


def log_beta(x: float, y: float) -> float:
    if not (x > 0 and y > 0):
        raise ValueError(f"beta function needs positive arguments, got ({x}, {y})")
    return log_gamma(x) + log_gamma(y) - log_gamma(x + y)


def beta_fn(x: float, y: float) -> float:
    """Euler beta function B(x, y)."""
    return math.exp(log_beta(x, y))


def rhs_half_beta(q: float) -> float:
    """Right-hand side ``B(q, 1/2) / 2`` of the beta equation, for finite q > 1."""
    if not (q > 1 and math.isfinite(q)):
        raise ValueError(f"rhs_half_beta needs finite q > 1, got {q}")
    return 0.5 * beta_fn(q, 0.5)


def rhs_duplication(q: float) -> float:
    """The same constant written as ``2^(2q-2) B(q, q)``."""
    if not (q > 1 and math.isfinite(q)):
        raise ValueError(f"rhs_duplication needs finite q > 1, got {q}")
    return math.exp((2 * q - 2) * math.log(2.0) + log_beta(q, q))


def is_integer_q(q: float) -> bool:
    return abs(q - round(q)) < _NEAR_INTEGER


def kernel_method(q: float) -> str:
    return CLOSED_FORM if is_integer_q(q) else ADAPTIVE


def _closed_form(m: int, t: float) -> float:
    # (x^2-1)^m with x = 1 + t equals t^m (2+t)^m; expanding (2+t)^m keeps
    # every term positive, unlike the alternating expansion in powers of x.
    if t == 0.0:
        return 0.0
    j = np.arange(m + 1)
    if m <= 100:
        coef = np.array([math.comb(m, int(k)) for k in j], dtype=float)
        terms = coef * 2.0 ** (m - j) * t ** (m + 1 + j) / (m + 1 + j)
        return float(np.sum(terms))
    logc = np.array([math.lgamma(m + 1) - math.lgamma(k + 1) - math.lgamma(m - k + 1) for k in j])
    logs = logc + (m - j) * math.log(2.0) + (m + 1 + j) * math.log(t) - np.log(m + 1 + j)
    top = logs.max()
    total = float(np.sum(np.exp(logs - top)))
    if top + math.log(total) > 709.0:
        return math.inf
    return math.exp(top) * total


def _adaptive(q: float, t: float) -> float:
    if t == 0.0:
        return 0.0
    e = q - 1.0
    # the integrand increases in s, so its largest value sits at s = t
    if e * math.log(t * (2.0 + t)) > 700.0:
        return math.inf

    def integrand(s):
        return (s * (2.0 + s)) ** e

    # geometric grading toward the s = 0 end where s^(q-1) is not smooth
    k = np.arange(40, -1, -1)
    breaks = np.concatenate([[0.0], t * 2.0 ** (-k.astype(float))])
    value, _ = _gauss.adaptive(integrand, breaks, tol=1e-15)
    return value


def kernel_integral(q: float, beta: float, method: str | None = None) -> float:
    """``int_1^beta (x^2-1)^(q-1) dx``.

    ``method`` forces :data:`CLOSED_FORM` or :data:`ADAPTIVE`; by default
    integer (or near-integer) ``q`` uses the closed form.
    """
    if not q >= 1 or not math.isfinite(q):
        raise ValueError(f"kernel_integral needs finite q >= 1, got {q}")
    if not beta >= 1:
        raise ValueError(f"kernel_integral needs beta >= 1, got {beta}")
    if beta > 4:
        raise ValueError(f"kernel_integral supports beta <= 4, got {beta}")
    method = method or kernel_method(q)
    t = beta - 1.0
    if method == CLOSED_FORM:
        if not is_integer_q(q):
            raise ValueError(f"closed form needs integer q, got {q}")
        return _closed_form(int(round(q)) - 1, t)
    if method == ADAPTIVE:
        return _adaptive(q, t)
    raise ValueError(f"unknown kernel method {method!r}")


def kernel_derivative(q: float, beta: float) -> float:
    """d/dbeta of :func:`kernel_integral`."""
    return (beta * beta - 1.0) ** (q - 1.0)


def recurrence_step(q: float, x: float, lower_value: float) -> float:
    """Lift ``int_1^x (t^2-1)^(q-1) dt`` to ``int_1^x (t^2-1)^q dt``."""
    if not q >= 1:
        raise ValueError(f"recurrence_step needs q >= 1, got {q}")
    return x * (x * x - 1.0) ** q / (2 * q + 1) - (2 * q / (2 * q + 1)) * lower_value
