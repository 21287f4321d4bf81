"""Oracle integration and the norms of ``f''`` that enter the error bounds."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.integrate import IntegrationWarning, quad
from scipy.optimize import brentq, minimize_scalar

from . import _gauss
from .quadcore import Interval

_ORDER = 10
_GRADING = 30
_MAX_DOUBLINGS = 24
_CHUNK = 1 << 16


class OracleError(ArithmeticError):
    """The reference integrator failed to reach its tolerance."""


@dataclass(frozen=True)
class NormReport:
    kind: str  # "Lp(p)" | "alexiewicz" | "alexiewicz-star"
    value: float
    mesh: int
    est_error: float


def _segments(iv: Interval, breakpoints: Sequence[float]) -> np.ndarray:
    pts = {iv.a, iv.b}
    pts.update(float(x) for x in breakpoints if iv.a < x < iv.b)
    return np.array(sorted(pts))


def _composite_gl(g, edges: np.ndarray, per_segment: int) -> float:
    """Sum of Gauss-Legendre panel estimates, ``per_segment`` panels per segment."""
    u = np.linspace(0.0, 1.0, per_segment + 1)
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        brk = lo + (hi - lo) * u
        brk[-1] = hi
        for start in range(0, per_segment, _CHUNK):
            stop = min(start + _CHUNK, per_segment)
            total += float(np.sum(_gauss.panel_sums(g, brk[start:stop], brk[start + 1 : stop + 1], _ORDER)))
    return total


def reference_integral(model, iv: Interval, tol: float = 1e-12, breakpoints: Sequence[float] = ()) -> float:
    """Oracle value of ``int_a^b f``.

    Panels are doubled on every segment between breakpoints until two
    successive levels agree to ``tol / 2``.  ``model`` is a
    :class:`~ctrap.rules.FunctionModel` or a vectorised callable.
    """
    if not tol >= 1e-13:
        raise ValueError(f"reference_integral supports tol >= 1e-13, got {tol}")
    f = getattr(model, "f", model)
    brk = tuple(breakpoints) + tuple(getattr(model, "breakpoints", ()))
    edges = _segments(iv, brk)
    prev = _composite_gl(f, edges, 1)
    for level in range(1, _MAX_DOUBLINGS + 1):
        cur = _composite_gl(f, edges, 2**level)
        if not math.isfinite(cur):
            raise OracleError("integrand produced a non-finite value")
        if abs(cur - prev) < tol / 2:
            return cur
        prev = cur
    raise OracleError(f"reference integral did not converge to {tol:g} after {_MAX_DOUBLINGS} doublings")


def _panels_per_segment(edges, mesh):
    lengths = np.diff(edges)
    return np.maximum(1, np.ceil(mesh * lengths / lengths.sum())).astype(int)


def _gl_on_mesh(g, edges, counts):
    total = 0.0
    for lo, hi, m in zip(edges[:-1], edges[1:], counts):
        brk = np.linspace(lo, hi, m + 1)
        total += float(np.sum(_gauss.panel_sums(g, brk[:-1], brk[1:], _ORDER)))
    return total


def _graded(edges, levels=_GRADING):
    """Add points ``lo + (hi - lo) * 2**-k`` (and mirrored) inside every segment."""
    t = 2.0 ** -np.arange(2, levels + 1)
    pts = [edges]
    for lo, hi in zip(edges[:-1], edges[1:]):
        pts += [lo + (hi - lo) * t, hi - (hi - lo) * t]
    return np.unique(np.concatenate(pts))


def _sample_grid(edges, mesh, density=16):
    counts = _panels_per_segment(edges, mesh * density)
    parts = [np.linspace(lo, hi, m + 1) for lo, hi, m in zip(edges[:-1], edges[1:], counts)]
    return np.unique(np.concatenate(parts))


def lp_norm(
    g: Callable,
    p: float,
    iv: Interval,
    mesh: int = 256,
    breakpoints: Sequence[float] = (),
    rtol: float = 1e-13,
    max_doublings: int = 10,
) -> NormReport:
    """``(int |g|^p)^(1/p)``, or the essential supremum for ``p = inf``.

    The integrand is divided by a sampled maximum before raising to ``p``
    so large exponents neither overflow nor underflow.
    """
    if mesh < 64:
        raise ValueError(f"mesh must be at least 64, got {mesh}")
    if not p >= 1:
        raise ValueError(f"p must be >= 1, got {p}")
    edges = _segments(iv, breakpoints)
    kind = f"Lp({'inf' if p == math.inf else f'{p:g}'})"
    xs = _sample_grid(edges, mesh)

    if p == math.inf:
        absg = np.abs(np.asarray(g(xs), dtype=float))
        if not np.all(np.isfinite(absg)):
            raise ValueError("g is not finite on the sampling grid")
        i = int(np.argmax(absg))
        scale = float(absg[i])
        lo, hi = xs[max(i - 1, 0)], xs[min(i + 1, len(xs) - 1)]
        best = scale
        if hi > lo:
            res = minimize_scalar(
                lambda x: -abs(float(np.asarray(g(np.array([x])))[0])),
                bounds=(lo, hi),
                method="bounded",
                options={"xatol": 1e-14},
            )
            best = max(best, -float(res.fun))
        return NormReport(kind, best, len(xs) - 1, best - scale)

    # finite p never evaluates at breakpoints, where g may have an integrable singularity
    mids = 0.5 * (xs[:-1] + xs[1:])
    absg = np.abs(np.asarray(g(mids), dtype=float))
    if not np.all(np.isfinite(absg)):
        raise ValueError("g is not finite on the sampling grid")
    scale = float(absg.max())
    if scale == 0.0:
        return NormReport(kind, 0.0, mesh, 0.0)

    def integrand(x):
        return (np.abs(g(x)) / scale) ** p

    # plain mesh first; a graded one only if doubling stalls near an endpoint
    for fine, budget in ((edges, max_doublings), (_graded(edges), max_doublings)):
        counts = _panels_per_segment(fine, mesh)
        prev = _gl_on_mesh(integrand, fine, counts) ** (1 / p)
        used = mesh
        for _ in range(budget):
            counts = counts * 2
            used *= 2
            cur = _gl_on_mesh(integrand, fine, counts) ** (1 / p)
            err = abs(cur - prev)
            prev = cur
            if err <= rtol * cur:
                return NormReport(kind, scale * prev, used, scale * err)
    # slow convergence means an endpoint singularity; QUADPACK extrapolates those.
    # Near a strong singularity double precision cannot resolve the mass, so the
    # reported error is the larger of QUADPACK's estimate and the GL disagreement.
    total, qerr = 0.0, 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        for lo, hi in zip(edges[:-1], edges[1:]):
            val, e = quad(lambda x: float(integrand(np.array([x]))[0]), lo, hi, limit=500, epsabs=0.0, epsrel=1e-12)
            total += val
            qerr += e
    value = total ** (1 / p)
    spread = max(abs(value - prev), value * qerr / (p * total) if total > 0 else 0.0)
    return NormReport(kind, scale * value, used, scale * spread)


def _cell_integrals(g, nodes, order=_ORDER):
    return _gauss.panel_sums(g, nodes[:-1], nodes[1:], order)


def _refine_extremum(g, nodes, F, i, sign):
    """Locate the extremum of ``sign * F`` next to node ``i`` where ``g`` changes sign."""
    gi = float(np.asarray(g(np.array([nodes[i]])))[0])
    if sign * gi > 0 and i + 1 < len(nodes):
        lo, hi, base = nodes[i], nodes[i + 1], F[i]
    elif sign * gi < 0 and i > 0:
        lo, hi, base = nodes[i - 1], nodes[i], F[i - 1]
    else:
        return F[i]
    g1 = lambda x: float(np.asarray(g(np.array([x])))[0])
    glo, ghi = g1(lo), g1(hi)
    if glo == 0.0 or ghi == 0.0 or (glo > 0) == (ghi > 0):
        return F[i]
    r = brentq(g1, lo, hi, xtol=1e-15)
    val = base + float(_gauss.panel_sums(g, np.array([lo]), np.array([r]), 20)[0])
    return max(sign * F[i], sign * val) * sign


def alexiewicz_norm(
    g: Callable,
    iv: Interval,
    mesh: int = 1024,
    star: bool = False,
    breakpoints: Sequence[float] = (),
    primitive: Optional[Callable] = None,
) -> NormReport:
    """Alexiewicz norm ``sup_x |int_a^x g|``, or with ``star`` the
    supremum of ``|int_I g|`` over subintervals ``I``.

    The primitive ``F`` is tabulated on a refined grid; the starred norm is
    the oscillation ``max F - min F``.  When an antiderivative of ``g`` is
    known it can be passed as ``primitive`` instead of integrating ``g``.
    """
    if mesh < 64:
        raise ValueError(f"mesh must be at least 64, got {mesh}")
    kind = "alexiewicz-star" if star else "alexiewicz"
    edges = _segments(iv, breakpoints)
    counts = _panels_per_segment(edges, mesh)
    nodes = np.unique(np.concatenate([np.linspace(lo, hi, m + 1) for lo, hi, m in zip(edges[:-1], edges[1:], counts)]))

    if primitive is not None:
        xs = _sample_grid(edges, mesh)
        F = np.asarray(primitive(xs), dtype=float) - float(np.asarray(primitive(np.array([iv.a])))[0])
        fmax, fmin = max(float(F.max()), 0.0), min(float(F.min()), 0.0)
        est = 0.0
    else:
        cells = _cell_integrals(g, nodes)
        F = np.concatenate([[0.0], np.cumsum(cells)])
        coarse = np.concatenate([[0.0], np.cumsum(_cell_integrals(g, nodes, 5))])
        est = float(np.max(np.abs(F - coarse)))
        imax, imin = int(np.argmax(F)), int(np.argmin(F))
        fmax = max(_refine_extremum(g, nodes, F, imax, +1), 0.0)
        fmin = min(_refine_extremum(g, nodes, F, imin, -1), 0.0)
    value = fmax - fmin if star else max(fmax, -fmin)
    return NormReport(kind, float(value), len(nodes) - 1, float(est))
