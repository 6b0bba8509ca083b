"""Factored evaluation of prod(lam - sigma_hat) / prod(lam - sigma).

Coincident points of the two sets (within ``atol``) are paired and removed
before anything is evaluated, so the ratio is finite at common points.
"""

from __future__ import annotations

import numpy as np

from .core import PoleAtPoint


def coincident_pairs(sigma, sigma_hat, atol: float) -> list:
    """Index pairs ``(i, j)`` with ``|sigma[i] - sigma_hat[j]| <= atol``.

    Both inputs are sorted; a two-pointer merge matches each point at most
    once.
    """
    pairs = []
    i = j = 0
    while i < len(sigma) and j < len(sigma_hat):
        d = sigma[i] - sigma_hat[j]
        if abs(d) <= atol:
            pairs.append((i, j))
            i += 1
            j += 1
        elif d < 0:
            i += 1
        else:
            j += 1
    return pairs


def reduced(sigma, sigma_hat, atol: float):
    """The two point sets with coincident pairs removed."""
    pairs = coincident_pairs(sigma, sigma_hat, atol)
    si = {i for i, _ in pairs}
    sj = {j for _, j in pairs}
    s = np.array([x for i, x in enumerate(sigma) if i not in si], dtype=float)
    h = np.array([x for j, x in enumerate(sigma_hat) if j not in sj], dtype=float)
    return s, h


def _check_pole(s, lam, atol):
    if s.size and np.min(np.abs(np.asarray(lam)[..., None] - s)) <= atol:
        raise PoleAtPoint(f"lambda={lam!r} is a pole of the two-spectra ratio")


def ratio(sigma, sigma_hat, lam, atol: float):
    """Value at ``lam``; a float for scalar ``lam``, an array otherwise."""
    s, h = reduced(sigma, sigma_hat, atol)
    x = np.asarray(lam, dtype=float)
    _check_pole(s, x, atol)
    # pair factors in sorted order so each quotient stays moderate
    value = np.prod((x[..., None] - h) / (x[..., None] - s), axis=-1)
    return float(value) if value.ndim == 0 else value


def ratio_derivative(sigma, sigma_hat, lam: float, atol: float) -> float:
    s, h = reduced(sigma, sigma_hat, atol)
    lam = float(lam)
    _check_pole(s, lam, atol)
    num = lam - h
    den = lam - s
    zero = np.flatnonzero(num == 0.0)
    if zero.size == 0:
        value = float(np.prod(num / den))
        return value * float(np.sum(1.0 / num) - np.sum(1.0 / den))
    if zero.size > 1:
        return 0.0
    keep = np.ones(num.size, dtype=bool)
    keep[zero[0]] = False
    return float(np.prod(num[keep] / den[keep]) / den[~keep][0])


def derivative_scale(sigma, sigma_hat, lam: float, atol: float) -> float:
    """Sum of magnitudes of the log-derivative terms times ``|ratio|``.

    This is the size the derivative would have without cancellation, and is
    the natural yardstick for deciding whether it vanishes.
    """
    s, h = reduced(sigma, sigma_hat, atol)
    lam = float(lam)
    value = abs(ratio(sigma, sigma_hat, lam, atol))
    terms = np.concatenate([1.0 / np.abs(lam - h[lam != h]), 1.0 / np.abs(lam - s)])
    return value * float(np.sum(terms)) if terms.size else 0.0
