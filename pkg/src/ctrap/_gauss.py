"""Vectorised Gauss-Legendre panel quadrature used by the numeric paths."""

from __future__ import annotations

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=None)
def nodes_weights(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def panel_sums(f, left, right, order=10):
    """Gauss-Legendre estimate of ``f`` over each panel ``[left[i], right[i]]``.

    ``f`` must accept a 2-D array and return an array of the same shape.
    """
    x, w = nodes_weights(order)
    left = np.asarray(left, dtype=float)
    right = np.asarray(right, dtype=float)
    half = 0.5 * (right - left)
    mid = 0.5 * (right + left)
    pts = mid[:, None] + half[:, None] * x[None, :]
    vals = np.asarray(f(pts), dtype=float)
    if vals.shape != pts.shape:
        vals = np.broadcast_to(vals, pts.shape)
    return half * (vals @ w)


def adaptive(f, breaks, tol=1e-14, order=10, max_level=60, max_panels=200_000):
    """Adaptive bisection over the panels delimited by ``breaks``.

    A panel is accepted once its one-panel and two-half-panel estimates
    differ by less than ``tol`` scaled by the panel's share of the total
    width.  Returns ``(value, error_estimate)``.
    """
    breaks = np.asarray(breaks, dtype=float)
    total = breaks[-1] - breaks[0]
    left, right = breaks[:-1], breaks[1:]
    whole = panel_sums(f, left, right, order)
    value = 0.0
    err = 0.0
    for _ in range(max_level):
        mid = 0.5 * (left + right)
        lh = panel_sums(f, left, mid, order)
        rh = panel_sums(f, mid, right, order)
        halves = lh + rh
        diff = np.abs(halves - whole)
        local_tol = tol * np.maximum((right - left) / total, 1e-3)
        # below this the comparison only measures rounding noise
        noise = 64 * np.finfo(float).eps * (np.abs(lh) + np.abs(rh))
        ok = diff <= np.maximum(local_tol, noise)
        # panels that can no longer be split in floating point are accepted too
        ok |= (mid <= left) | (mid >= right)
        value += float(np.sum(halves[ok]))
        err += float(np.sum(diff[ok]))
        keep = ~ok
        if not keep.any():
            return value, err
        if 2 * keep.sum() > max_panels:
            break
        left = np.concatenate([left[keep], mid[keep]])
        right = np.concatenate([mid[keep], right[keep]])
        whole = np.concatenate([lh[keep], rh[keep]])
    raise ArithmeticError("adaptive Gauss-Legendre did not converge")
