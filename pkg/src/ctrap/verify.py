"""Experiments that check the bounds are valid and sharp.

Extremal functions attain the L^p bounds; delta families (hat-shaped bumps
of width ``1/n`` and unit mass) approach the L^1 and Alexiewicz bounds as
``n`` grows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import _gauss
from .beta_solver import solve_beta
from .bounds import composite_bound, hk_bound, optimal_bound, trap_bound
from .norms import alexiewicz_norm, lp_norm, reference_integral
from .quadcore import ConjugatePair, Interval, Regime, RuleSpec, alpha_from_beta, conjugate
from .rules import FunctionModel, composite, optimal_rule, preset, single_panel

EXTREMAL_CELLS = 1 << 14
DELTA_KINDS = ("p1-single", "hk-three-point", "midpoint")


@dataclass(frozen=True)
class SharpnessResult:
    regime: ConjugatePair
    ratio: float
    n_family: Optional[int]
    error: float
    bound: float
    family: str


@dataclass(frozen=True)
class MinimalityScan:
    alpha_star: float
    curve: list
    objective: str

    def is_unimodal(self, noise: float = 1e-12) -> bool:
        values = [v for _, v in self.curve]
        k = int(np.argmin(values))
        down = all(values[i + 1] <= values[i] + noise for i in range(k))
        up = all(values[i + 1] >= values[i] - noise for i in range(k, len(values) - 1))
        return down and up


def minimizing_quadratic(alpha: float, iv: Interval):
    c = iv.midpoint()
    return lambda x: (x - c) ** 2 - alpha**2


class _TabulatedAntiderivatives:
    """``f'`` and ``f`` from ``f''`` with ``f(a) = f'(a) = 0``.

    Cell totals are accumulated on a fine grid; inside a cell the remaining
    piece is integrated with Gauss-Legendre, so the result is accurate to
    rounding wherever ``f''`` is smooth on each cell.
    """

    def __init__(self, fsecond, iv: Interval, breakpoints: Sequence[float], cells: int):
        grid = np.linspace(iv.a, iv.b, cells + 1)
        extra = [x for x in breakpoints if iv.a < x < iv.b]
        self.nodes = np.unique(np.concatenate([grid, extra]))
        self.fsecond = fsecond
        left, right = self.nodes[:-1], self.nodes[1:]
        h = right - left
        d1 = _gauss.panel_sums(fsecond, left, right, 12)
        d0 = _gauss.panel_sums(
            lambda t: (right[:, None] - t) * fsecond(t), left, right, 12
        )
        self.F1 = np.concatenate([[0.0], np.cumsum(d1)])
        self.F0 = np.concatenate([[0.0], np.cumsum(self.F1[:-1] * h + d0)])

    def _locate(self, x):
        x = np.asarray(x, dtype=float)
        i = np.clip(np.searchsorted(self.nodes, x, side="right") - 1, 0, len(self.nodes) - 2)
        return x, i, x - self.nodes[i]

    def _inner(self, x, i, d, weight_by_distance):
        u, w = _gauss.nodes_weights(12)
        flat_x, flat_d, flat_i = x.ravel(), d.ravel(), i.ravel()
        t = self.nodes[flat_i][:, None] + flat_d[:, None] * (u[None, :] + 1) / 2
        vals = self.fsecond(t)
        if weight_by_distance:
            vals = (flat_x[:, None] - t) * vals
        return (flat_d / 2 * (vals @ w)).reshape(x.shape)

    def fprime(self, x):
        x, i, d = self._locate(x)
        return self.F1[i] + self._inner(x, i, d, False)

    def f(self, x):
        x, i, d = self._locate(x)
        return self.F0[i] + self.F1[i] * d + self._inner(x, i, d, True)


def extremal_function(regime: ConjugatePair, iv: Interval, cells: int = EXTREMAL_CELLS) -> FunctionModel:
    """The function attaining the optimal bound of ``regime`` (``1 < p <= inf``).

    ``f'' = sgn(phi) |phi|^(1/(p-1))`` with ``phi`` the minimizing quadratic
    (``f'' = sgn(phi)`` for ``p = inf``); ``f`` is fixed up to the linear part
    by ``f(a) = f'(a) = 0``.
    """
    if regime.regime is Regime.L1:
        raise ValueError("no function attains the p = 1 bound; use delta_family('p1-single', ...)")
    if regime.regime is Regime.ALEXIEWICZ:
        raise ValueError("the Alexiewicz bounds are approached with delta families")
    alpha = alpha_from_beta(solve_beta(regime.q).beta, iv)
    phi = minimizing_quadratic(alpha, iv)
    c = iv.midpoint()
    if regime.regime is Regime.LINF:
        def fsecond(x):
            return np.sign(phi(x))
    else:
        expo = 1.0 / (regime.p - 1.0)

        def fsecond(x):
            v = phi(x)
            return np.sign(v) * np.abs(v) ** expo

    roots = (c - alpha, c + alpha)
    tab = _TabulatedAntiderivatives(fsecond, iv, roots, cells)
    return FunctionModel(tab.f, tab.fprime, fsecond, f"extremal[{regime.label()}]", roots)


# hat bump of unit mass on [0, w] and its first three antiderivatives

def _hat(t, w):
    return np.where((t > 0) & (t < w), (2 / w) * (1 - np.abs(2 * t / w - 1)), 0.0)


def _hat1(t, w):
    t = np.clip(t, 0.0, w)
    return np.where(t <= w / 2, 2 * t**2 / w**2, 1 - 2 * (w - t) ** 2 / w**2)


def _hat2(t, w):
    left = 2 * np.clip(t, 0.0, w / 2) ** 3 / (3 * w**2)
    s = np.clip(t, w / 2, w)
    right = s - w / 2 + 2 * (w - s) ** 3 / (3 * w**2)
    tail = np.maximum(t - w, 0.0)
    return np.where(t <= w / 2, left, right + tail)


def delta_family(kind: str, n: int, iv: Interval) -> FunctionModel:
    """A member of the bump sequences that approach the unattained bounds.

    ``p1-single`` and ``midpoint`` put one unit bump just right of the
    midpoint; ``hk-three-point`` uses ``+1`` at ``a``, ``-2`` at the
    midpoint and ``+1`` ending at ``b``.  Bumps have width ``1/n``.
    """
    if kind not in DELTA_KINDS:
        raise ValueError(f"unknown delta family {kind!r}; expected one of {DELTA_KINDS}")
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    w = 1.0 / n
    c = iv.midpoint()
    if w > iv.half_width:
        raise ValueError(f"bump width 1/{n} does not fit in half of [{iv.a}, {iv.b}]")
    if kind == "hk-three-point":
        bumps = ((iv.a, 1.0), (c, -2.0), (iv.b - w, 1.0))
    else:
        bumps = ((c, 1.0),)

    def fsecond(x):
        return sum(s * _hat(x - x0, w) for x0, s in bumps)

    def fprime(x):
        return sum(s * _hat1(x - x0, w) for x0, s in bumps)

    def f(x):
        return sum(s * _hat2(x - x0, w) for x0, s in bumps)

    brk = tuple(x0 + k * w / 2 for x0, _ in bumps for k in (0, 1, 2))
    return FunctionModel(f, fprime, fsecond, f"{kind}[n={n}]", brk)


def true_error(model: FunctionModel, iv: Interval, spec: RuleSpec, n: int = 1, tol: float = 1e-13) -> float:
    """``int f - rule(f)`` with the integral from the oracle."""
    exact = reference_integral(model, iv, tol)
    return exact - composite(model, iv, n, spec).estimate


def sharpness_experiment(
    regime: ConjugatePair,
    iv: Interval = Interval(0.0, 1.0),
    n_family: Optional[int] = None,
    star: bool = False,
) -> SharpnessResult:
    """Ratio of the actual error to the bound on the worst-case function.

    For ``1 < p <= inf`` the extremal function is used and the ratio should
    be 1.  For ``p = 1`` and the Alexiewicz regime a delta-family member
    ``n_family`` (default 100) is used; ``star`` selects the
    subinterval-norm variant of the Alexiewicz bound.
    """
    if regime.regime is Regime.L1 or regime.regime is Regime.ALEXIEWICZ:
        n_family = 100 if n_family is None else n_family
        if regime.regime is Regime.L1:
            family = "p1-single"
            model = delta_family(family, n_family, iv)
            spec = optimal_rule(regime)
            norm = lp_norm(model.fsecond, 1, iv, breakpoints=model.breakpoints).value
            bound = optimal_bound(regime, norm, iv).bound
        else:
            family = "midpoint" if star else "hk-three-point"
            model = delta_family(family, n_family, iv)
            spec = preset("alexiewicz")
            norm = alexiewicz_norm(model.fsecond, iv, star=star, breakpoints=model.breakpoints, primitive=model.fprime).value
            bound = hk_bound(norm, iv, star=star).bound
    else:
        family = "extremal"
        n_family = None
        model = extremal_function(regime, iv)
        spec = optimal_rule(regime)
        norm = lp_norm(model.fsecond, regime.p, iv, breakpoints=model.breakpoints).value
        bound = optimal_bound(regime, norm, iv).bound
    err = true_error(model, iv, spec)
    return SharpnessResult(regime, abs(err) / bound, n_family, err, bound, family)


def gq_closed_form(q: float, alpha: float, half_width: float) -> float:
    """``||phi||_q^q`` at the minimizer, ``2a (a^2 - alpha^2)^q / (2q + 1)``."""
    a = half_width
    return 2 * a * (a * a - alpha * alpha) ** q / (2 * q + 1)


def phi_norm(q: float, alpha: float, iv: Interval) -> float:
    """``||(x - c)^2 - alpha^2||_q`` on ``iv`` computed numerically."""
    c = iv.midpoint()
    return lp_norm(minimizing_quadratic(alpha, iv), q, iv, mesh=64, breakpoints=(c - alpha, c + alpha)).value


def _variation(g, iv: Interval, breakpoints, mesh=4096):
    xs = np.unique(np.concatenate([np.linspace(iv.a, iv.b, mesh + 1), [x for x in breakpoints if iv.a < x < iv.b]]))
    return float(np.sum(np.abs(np.diff(g(xs)))))


def minimality_scan(q, iv: Interval, grid: int = 1001) -> MinimalityScan:
    """Scan the objective over ``alpha`` in ``[0, (b-a)/2]`` and return the argmin.

    ``q`` is a conjugate exponent in ``[1, inf]`` (objective ``||phi_alpha||_q``)
    or ``"alexiewicz"`` (objective ``(|phi(b)| + V phi) / 2`` from the
    variation bound, minimized by the trapezoid ``alpha = (b-a)/2``).
    """
    if grid < 101:
        raise ValueError(f"grid must have at least 101 points, got {grid}")
    alphas = np.linspace(0.0, iv.half_width, grid)
    c = iv.midpoint()
    if q == "alexiewicz":
        objective = "(|phi(b)| + V(phi)) / 2"

        def value(al):
            phi = minimizing_quadratic(al, iv)
            return 0.5 * (abs(phi(iv.b)) + _variation(phi, iv, (c,)))
    else:
        q = float(q)
        objective = f"||phi||_{'inf' if q == math.inf else f'{q:g}'}"

        def value(al):
            return phi_norm(q, float(al), iv)

    curve = [(float(al), float(value(al))) for al in alphas]
    k = min(range(grid), key=lambda i: curve[i][1])
    return MinimalityScan(curve[k][0], curve, objective)


# convergence studies and the test-function catalog


@dataclass(frozen=True)
class CatalogFunction:
    """A test function on ``[0, 1]`` with its exact integral.

    ``lp_norm_exact`` optionally gives ``||f''||_p`` in closed form; it is
    needed when ``f''`` is singular and numeric norms would be unreliable.
    ``finite_p`` is the set of exponents (``math.inf`` included) where
    ``||f''||_p`` is finite, as a predicate.
    """

    name: str
    model: FunctionModel
    exact: float
    finite_p: object = lambda p: True
    lp_norm_exact: object = None

    def norm(self, regime: ConjugatePair, iv: Interval = Interval(0.0, 1.0)) -> float:
        m = self.model
        if regime.regime is Regime.ALEXIEWICZ:
            return alexiewicz_norm(m.fsecond, iv, breakpoints=m.breakpoints, primitive=m.fprime).value
        if self.lp_norm_exact is not None:
            return self.lp_norm_exact(regime.p)
        return lp_norm(m.fsecond, regime.p, iv, breakpoints=m.breakpoints).value


def catalog() -> list:
    rough_c = 1 / 3

    def rough_lp(p):
        if p >= 2:
            return math.inf
        s = 1 - p / 2
        return 0.75 * ((rough_c**s + (1 - rough_c) ** s) / s) ** (1 / p)

    return [
        CatalogFunction("x^2", FunctionModel(lambda x: x**2, lambda x: 2 * x, lambda x: 2 + 0 * x, "x^2"), 1 / 3),
        CatalogFunction("x^3", FunctionModel(lambda x: x**3, lambda x: 3 * x**2, lambda x: 6 * x, "x^3"), 1 / 4),
        CatalogFunction("x^4", FunctionModel(lambda x: x**4, lambda x: 4 * x**3, lambda x: 12 * x**2, "x^4"), 1 / 5),
        CatalogFunction("exp(x)", FunctionModel(np.exp, np.exp, np.exp, "exp(x)"), math.e - 1),
        CatalogFunction(
            "sin(3x)",
            FunctionModel(lambda x: np.sin(3 * x), lambda x: 3 * np.cos(3 * x), lambda x: -9 * np.sin(3 * x), "sin(3x)"),
            (1 - math.cos(3)) / 3,
        ),
        CatalogFunction(
            "sin(x)", FunctionModel(np.sin, np.cos, lambda x: -np.sin(x), "sin(x)"), 1 - math.cos(1)
        ),
        CatalogFunction(
            "1/(1+x^2)",
            FunctionModel(
                lambda x: 1 / (1 + x**2),
                lambda x: -2 * x / (1 + x**2) ** 2,
                lambda x: (6 * x**2 - 2) / (1 + x**2) ** 3,
                "1/(1+x^2)",
            ),
            math.pi / 4,
        ),
        CatalogFunction(
            "|x-1/3|^(3/2)",
            FunctionModel(
                lambda x: np.abs(x - rough_c) ** 1.5,
                lambda x: 1.5 * np.sign(x - rough_c) * np.abs(x - rough_c) ** 0.5,
                lambda x: 0.75 * np.abs(x - rough_c) ** -0.5,
                "|x-1/3|^(3/2)",
                (rough_c,),
            ),
            (rough_c**2.5 + (1 - rough_c) ** 2.5) / 2.5,
            finite_p=lambda p: p < 2,
            lp_norm_exact=rough_lp,
        ),
    ]


def catalog_function(name: str) -> CatalogFunction:
    for cf in catalog():
        if cf.name == name:
            return cf
    raise KeyError(name)


@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    estimate: float
    error: float
    order: Optional[float]
    bound: Optional[float] = None


def convergence_study(
    model: FunctionModel,
    iv: Interval,
    spec: RuleSpec,
    ns: Sequence[int],
    exact: Optional[float] = None,
    norm: Optional[float] = None,
    regime: Optional[ConjugatePair] = None,
) -> list:
    """Errors of the composite rule over ``ns`` and the observed orders.

    The order at ``ns[i]`` is ``log(E[i-1]/E[i]) / log(ns[i]/ns[i-1])``.
    """
    if exact is None:
        exact = reference_integral(model, iv, 1e-13)
    rows = []
    prev = None
    for n in ns:
        res = composite(model, iv, n, spec, norm=norm, regime=regime)
        err = abs(exact - res.estimate)
        order = None
        if prev is not None and prev[1] > 0 and err > 0:
            order = math.log(prev[1] / err) / math.log(n / prev[0])
        rows.append(ConvergenceRow(n, res.estimate, err, order, res.bound))
        prev = (n, err)
    return rows


def observed_orders(rows) -> list:
    return [r.order for r in rows if r.order is not None]
