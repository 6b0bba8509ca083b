"""Eigenvalues by Sturm-count bisection and site eigenvector weights."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    DEFAULT_TOL,
    BreakdownAtPivot,
    JacobiMatrix,
    NonSimpleSpectrum,
    TolerancePolicy,
    require_jacobi,
    require_site,
)


@dataclass(frozen=True)
class WeightedSpectrum:
    """Eigenvalues with the squared eigenvector components at ``site``."""

    values: tuple
    weights: tuple
    site: int

    def __len__(self):
        return len(self.values)

    def nonzero(self, threshold: float = DEFAULT_TOL.rel_tol) -> tuple:
        """Indices whose weight is at least ``threshold``."""
        return tuple(i for i, w in enumerate(self.weights) if w >= threshold)


def gershgorin(a, b) -> tuple:
    a = np.asarray(a, dtype=float)
    r = np.zeros_like(a)
    if a.size > 1:
        ab = np.abs(np.asarray(b, dtype=float))
        r[:-1] += ab
        r[1:] += ab
    return float(np.min(a - r)), float(np.max(a + r))


def _pivot_counts(a, b2, x) -> np.ndarray:
    """Number of negative LDL^T pivots of ``J - x`` for each entry of ``x``.

    Exactly-zero pivots are replaced by a tiny negative number, which is the
    same as evaluating at ``x`` nudged upward by an infinitesimal amount.
    """
    x = np.asarray(x, dtype=float)
    tiny = np.finfo(float).tiny
    d = a[0] - x
    d = np.where(d == 0.0, -tiny, d)
    count = (d < 0).astype(int)
    # b^2 / -tiny overflows to -inf, which is the intended limit
    with np.errstate(over="ignore"):
        for i in range(1, a.size):
            d = (a[i] - x) - b2[i - 1] / d
            d = np.where(d == 0.0, -tiny, d)
            count += d < 0
    return count


def sturm_count(J: JacobiMatrix, x: float, tol: TolerancePolicy = DEFAULT_TOL, retry: bool = True) -> int:
    """Number of eigenvalues of ``J`` strictly below ``x``.

    An exactly-zero pivot raises :class:`BreakdownAtPivot` unless ``retry``
    is set, in which case ``x`` is moved down by ``eigen_tol * spread`` and the
    count repeated.
    """
    require_jacobi(J)
    a = J.diag
    b2 = J.offdiag ** 2
    x = float(x)
    spread = TolerancePolicy.spread(gershgorin(J.a, J.b), [x])
    for _ in range(8):
        d = a[0] - x
        count = int(d < 0)
        broke = d == 0.0
        # a denormal pivot overflows to -inf, which still counts correctly
        with np.errstate(over="ignore"):
            for i in range(1, a.size):
                if broke:
                    break
                d = (a[i] - x) - b2[i - 1] / d
                count += d < 0
                broke = d == 0.0
        if not broke:
            return int(count)
        if not retry:
            raise BreakdownAtPivot(f"zero pivot in Sturm sequence at x={x!r}")
        x -= tol.eigen_tol * spread
    raise BreakdownAtPivot(f"repeated zero pivots near x={x!r}")


def _bisect_eigenvalues(a, b, width_tol: float, spread_floor: float = 1.0) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    N = a.size
    if N == 1:
        return a.copy()
    b2 = b ** 2
    lo, hi = gershgorin(a, b)
    spread = max(spread_floor, abs(lo), abs(hi))
    width = width_tol * spread
    lo -= width
    hi += width
    k = np.arange(1, N + 1)
    lower = np.full(N, lo)
    upper = np.full(N, hi)
    # invariant: count(lower) < k <= count(upper).  Bisection continues past
    # ``width`` down to machine resolution; it is cheap and the weights that
    # are computed at these points inherit their accuracy.
    while True:
        mid = 0.5 * (lower + upper)
        active = (mid > lower) & (mid < upper)
        if not np.any(active):
            break
        c = _pivot_counts(a, b2, mid)
        go_up = (c >= k) & active
        go_down = ~go_up & active
        upper = np.where(go_up, mid, upper)
        lower = np.where(go_down, mid, lower)
    assert np.all(upper - lower <= width)
    return 0.5 * (lower + upper)


def eigenvalues(J: JacobiMatrix, tol: TolerancePolicy = DEFAULT_TOL) -> np.ndarray:
    """Strictly increasing eigenvalues of ``J`` (read-only array)."""
    require_jacobi(J)
    vals = _bisect_eigenvalues(J.a, J.b, tol.eigen_tol)
    if np.any(np.diff(vals) <= 0):
        raise NonSimpleSpectrum("bisection brackets collapsed; off-diagonal too small?")
    vals.setflags(write=False)
    return vals


def _twisted_eigenvectors(a, b, lam) -> np.ndarray:
    """Eigenvectors for each ``lam`` from a twisted factorization; shape ``(N, len(lam))``.

    Pivots of ``J - lam`` are run from both ends and the vector is grown
    outward from the index where the twisted pivot is smallest.  Unlike the
    plain three-term recurrence, this stays accurate when the eigenvector
    decays away from one end.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    lam = np.asarray(lam, dtype=float)
    N, m = a.size, lam.size
    if N == 1:
        return np.ones((1, m))
    pivmin = np.finfo(float).tiny / np.finfo(float).eps * max(1.0, float(np.max(b ** 2)))

    def safe(d):
        return np.where(np.abs(d) < pivmin, -pivmin, d)

    top = np.empty((N, m))
    bot = np.empty((N, m))
    top[0] = safe(a[0] - lam)
    for k in range(1, N):
        top[k] = safe(a[k] - lam - b[k - 1] ** 2 / top[k - 1])
    bot[N - 1] = safe(a[N - 1] - lam)
    for k in range(N - 2, -1, -1):
        bot[k] = safe(a[k] - lam - b[k] ** 2 / bot[k + 1])
    gamma = top + bot - (a[:, None] - lam)
    r = np.argmin(np.abs(gamma), axis=0)
    cols = np.arange(m)
    z = np.zeros((N, m))
    z[r, cols] = 1.0
    # upward from the twist uses top pivots, downward uses bottom pivots
    for k in range(N - 2, -1, -1):
        up = k < r
        z[k] = np.where(up, -b[k] * z[k + 1] / top[k], z[k])
    for k in range(1, N):
        down = k > r
        z[k] = np.where(down, -b[k - 1] * z[k - 1] / bot[k], z[k])
    return z


def eigenvector_weights(J: JacobiMatrix, n: int, tol: TolerancePolicy = DEFAULT_TOL) -> WeightedSpectrum:
    """Squared unit eigenvector component at site ``n`` for each eigenvalue."""
    require_jacobi(J)
    n = require_site(J, n)
    lam = eigenvalues(J, tol)
    z = _twisted_eigenvectors(J.a, J.b, lam)
    scale = np.max(np.abs(z), axis=0)
    z = z / scale
    w = z[n] ** 2 / np.sum(z ** 2, axis=0)
    return WeightedSpectrum(tuple(float(x) for x in lam), tuple(float(x) for x in w), n)


def weights_sum(ws: WeightedSpectrum) -> float:
    return math.fsum(ws.weights)
