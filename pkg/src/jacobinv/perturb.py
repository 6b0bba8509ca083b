"""The interior mass-spring perturbation ``J -> J~`` and its parameters."""

from __future__ import annotations

import math

from . import _ratio
from .core import (
    DEFAULT_TOL,
    InvalidTheta,
    JacobiMatrix,
    PerturbationParams,
    PoleAtPoint,
    TolerancePolicy,
    require_jacobi,
    require_site,
)


def perturbation_from(theta_sq: float, K: float, n: int) -> PerturbationParams:
    """Build parameters from the mass ratio and ``K``; ``M = (1/theta^2 - 1) K``."""
    theta_sq = float(theta_sq)
    if not (0.0 < theta_sq < 1.0) or not math.isfinite(theta_sq):
        raise InvalidTheta(f"theta_sq={theta_sq!r} outside (0, 1)")
    K = float(K)
    return PerturbationParams(int(n), theta_sq, K, (1.0 / theta_sq - 1.0) * K)


def apply_perturbation(J: JacobiMatrix, p: PerturbationParams) -> JacobiMatrix:
    """Perturbed matrix: ``a_n -> theta^2 (a_n + M)``, ``b_{n-1}, b_n -> theta b``."""
    require_jacobi(J)
    n = require_site(J, p.site)
    theta = math.sqrt(p.theta_sq)
    a = list(J.a)
    b = list(J.b)
    a[n] = p.theta_sq * (a[n] + p.M)
    if n > 0:
        b[n - 1] = theta * b[n - 1]
    if n < J.size - 1:
        b[n] = theta * b[n]
    return JacobiMatrix(a, b)


def mass_ratio_from_unmovable(sigma, sigma_hat, lam_star: float, tol: TolerancePolicy = DEFAULT_TOL) -> float:
    """Mass ratio ``m_n / m~_n`` read off the two spectra at an unmovable point or at ``K``.

    Coincident factors of the two spectra cancel before the ratio is formed.
    """
    spread = TolerancePolicy.spread(sigma, sigma_hat, [lam_star])
    atol = tol.atol(spread)
    try:
        return _ratio.ratio(sigma, sigma_hat, lam_star, atol)
    except PoleAtPoint:
        raise PoleAtPoint(f"lambda*={lam_star!r} lies in sigma but not in sigma_hat") from None
