"""Diagonal Green's function ``G(lam, n, n)`` by three independent routes.

* :func:`green_nn_poly` -- ratio of second/first-kind polynomials to ``Q_N``;
* :func:`green_nn_spectral` -- eigenvalue/eigenvector-weight expansion;
* :func:`green_nn_two_spectra` -- only the two spectra and ``theta^2, K``.
"""

from __future__ import annotations

import numpy as np

from . import _ratio
from .core import (
    DEFAULT_TOL,
    JacobiMatrix,
    PoleAtK,
    PoleAtPoint,
    TolerancePolicy,
    require_jacobi,
    require_site,
)
from .eigen import _pivot_counts, eigenvector_weights, gershgorin
from .poly import first_kind_table, qn_values, second_kind_table


def _shaped(lam, values):
    return float(values) if np.ndim(lam) == 0 else values


def green_nn_poly(J: JacobiMatrix, n: int, lam, tol: TolerancePolicy = DEFAULT_TOL):
    """``-phi_N(lam) P_n(lam) / Q_N(lam)``; ``lam`` may be a scalar or an array."""
    require_jacobi(J)
    n = require_site(J, n)
    x = np.asarray(lam, dtype=float)
    spread = TolerancePolicy.spread(gershgorin(J.a, J.b), x)
    h = tol.atol(spread)
    b2 = J.offdiag ** 2
    near = _pivot_counts(J.diag, b2, x - h) != _pivot_counts(J.diag, b2, x + h)
    if np.any(near):
        raise PoleAtPoint(f"lambda={np.extract(near, x)[0]!r} is within tolerance of an eigenvalue")
    q = qn_values(J.a, J.b, x)
    if np.any(q == 0.0):
        raise PoleAtPoint(f"Q_N vanishes at lambda={np.extract(q == 0.0, x)[0]!r}")
    phi_N = second_kind_table(J.a, J.b, n, x)[-1]
    P_n = first_kind_table(J.a, J.b, x)[n]
    return _shaped(lam, -phi_N * P_n / q)


def green_nn_spectral(J: JacobiMatrix, n: int, lam, tol: TolerancePolicy = DEFAULT_TOL):
    """``sum_k w_k / (lam_k - lam)`` with ``w_k = |psi_k(n)|^2``."""
    ws = eigenvector_weights(J, n, tol)
    return green_from_weights(ws.values, ws.weights, lam, tol)


def green_from_weights(values, weights, lam, tol: TolerancePolicy = DEFAULT_TOL):
    """Pole/residue sum at ``lam`` (scalar or array).

    Terms with a pole within tolerance of ``lam`` are dropped when their
    weight is below ``rel_tol``; otherwise ``lam`` is a pole.
    """
    values = np.asarray(values, dtype=float)
    weights = np.asarray(weights, dtype=float)
    x = np.asarray(lam, dtype=float)
    atol = tol.atol(TolerancePolicy.spread(values, x))
    diff = values - x[..., None]
    near = np.abs(diff) <= atol
    if np.any(near & (weights >= tol.rel_tol)):
        raise PoleAtPoint(f"lambda={lam!r} is a pole of G")
    safe = np.where(near, 1.0, diff)
    return _shaped(lam, np.sum(np.where(near, 0.0, weights / safe), axis=-1))


def rational_N(sigma, sigma_hat, lam, tol: TolerancePolicy = DEFAULT_TOL):
    """``prod(lam - sigma_hat_j) / prod(lam - sigma_j)`` with common factors cancelled."""
    atol = tol.atol(TolerancePolicy.spread(sigma, sigma_hat, [lam]))
    return _ratio.ratio(sigma, sigma_hat, lam, atol)


def rational_N_derivative(sigma, sigma_hat, lam: float, tol: TolerancePolicy = DEFAULT_TOL) -> float:
    """Exact derivative of :func:`rational_N` by logarithmic differentiation."""
    atol = tol.atol(TolerancePolicy.spread(sigma, sigma_hat, [lam]))
    return _ratio.ratio_derivative(sigma, sigma_hat, lam, atol)


def green_nn_two_spectra(sigma, sigma_hat, theta_sq: float, K: float, lam,
                         tol: TolerancePolicy = DEFAULT_TOL):
    """``(theta^2 - N(lam)) / ((1 - theta^2)(lam - K))``; ``lam`` scalar or array.

    At ``lam = K`` the singularity is removable exactly when ``N(K) = theta^2``;
    the value there is ``-N'(K) / (1 - theta^2)``.
    """
    x = np.asarray(lam, dtype=float)
    spread = TolerancePolicy.spread(sigma, sigma_hat, [K], x)
    atol = tol.atol(spread)
    at_K = np.abs(x - K) <= atol
    out = np.empty(x.shape)
    if np.any(at_K):
        NK = _ratio.ratio(sigma, sigma_hat, K, atol)
        if abs(NK - theta_sq) > tol.rel_tol:
            raise PoleAtK(f"N(K)={NK!r} differs from theta^2={theta_sq!r}; K is a pole")
        out[at_K] = -_ratio.ratio_derivative(sigma, sigma_hat, K, atol) / (1.0 - theta_sq)
    rest = x[~at_K]
    if rest.size:
        N = _ratio.ratio(sigma, sigma_hat, rest, atol)
        out[~at_K] = (theta_sq - N) / ((1.0 - theta_sq) * (rest - K))
    return _shaped(lam, out)


def green_scale(J: JacobiMatrix, n: int, lam, tol: TolerancePolicy = DEFAULT_TOL):
    """``sum_k w_k / |lam_k - lam|``, the natural magnitude for comparing values of ``G``.

    It bounds ``|G(lam)|`` and stays away from zero where ``G`` itself vanishes.
    """
    ws = eigenvector_weights(J, n, tol)
    d = np.abs(np.asarray(ws.values) - np.asarray(lam, dtype=float)[..., None])
    terms = np.where(d > 0, np.asarray(ws.weights) / np.where(d > 0, d, 1.0), 0.0)
    return _shaped(lam, np.sum(terms, axis=-1))


def relative_deviation(x, y, scale=0.0):
    """``|x - y| / max(|x|, |y|, scale)`` (0 where all three vanish); elementwise."""
    den = np.maximum(np.maximum(np.abs(x), np.abs(y)), np.abs(scale))
    dev = np.where(den > 0, np.abs(np.subtract(x, y)) / np.where(den > 0, den, 1.0), 0.0)
    return _shaped(dev, dev)
