"""First- and second-kind polynomials of a Jacobi matrix.

Polynomials are only ever evaluated pointwise through the three-term
recurrence; coefficient vectors are never formed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import EmptyRange, JacobiMatrix, PerturbationParams, require_jacobi, require_site


@dataclass(frozen=True)
class PolySequenceValue:
    """Values of a polynomial sequence at a single point ``at``.

    ``start`` is the index of the first entry, so ``values[k]`` is the
    polynomial of index ``start + k``.
    """

    at: float
    values: tuple
    start: int = 0

    def __getitem__(self, index: int) -> float:
        return self.values[index - self.start]

    def __len__(self):
        return len(self.values)


def first_kind_table(a, b, lam) -> np.ndarray:
    """``P_0..P_{N-1}`` at every point of ``lam``; shape ``(N,) + lam.shape``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    lam = np.asarray(lam, dtype=float)
    N = a.size
    out = np.empty((N,) + lam.shape)
    out[0] = 1.0
    prev = np.zeros(lam.shape)
    for i in range(N - 1):
        bim1 = b[i - 1] if i > 0 else 0.0
        out[i + 1] = ((lam - a[i]) * out[i] - bim1 * prev) / b[i]
        prev = out[i]
    return out


def qn_values(a, b, lam) -> np.ndarray:
    """``Q_N = (lam - a_{N-1}) P_{N-1} - b_{N-2} P_{N-2}``, vectorized in ``lam``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    lam = np.asarray(lam, dtype=float)
    P = first_kind_table(a, b, lam)
    N = a.size
    q = (lam - a[-1]) * P[-1]
    if N > 1:
        q = q - b[-1] * P[-2]
    return q


def second_kind_table(a, b, n: int, lam) -> np.ndarray:
    """``phi_n..phi_N`` at every point of ``lam`` (``b_{N-1}`` taken as 1)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    lam = np.asarray(lam, dtype=float)
    N = a.size
    bext = np.append(b, 1.0)
    out = np.empty((N - n + 1,) + lam.shape)
    out[0] = 0.0
    out[1] = 1.0 / bext[n]
    for i in range(n + 2, N + 1):
        k = i - n
        out[k] = ((lam - a[i - 1]) * out[k - 1] - bext[i - 2] * out[k - 2]) / bext[i - 1]
    return out


def eval_first_kind(J: JacobiMatrix, lam: float) -> PolySequenceValue:
    require_jacobi(J)
    vals = first_kind_table(J.a, J.b, float(lam))
    return PolySequenceValue(float(lam), tuple(float(v) for v in vals), 0)


def eval_second_kind(J: JacobiMatrix, n: int, lam: float) -> PolySequenceValue:
    require_jacobi(J)
    n = require_site(J, n)
    vals = second_kind_table(J.a, J.b, n, float(lam))
    return PolySequenceValue(float(lam), tuple(float(v) for v in vals), n)


def eval_QN(J: JacobiMatrix, lam: float) -> float:
    require_jacobi(J)
    return float(qn_values(J.a, J.b, float(lam)))


def submatrix(J: JacobiMatrix, lo: int, hi: int) -> JacobiMatrix:
    """Principal block of ``J`` on sites ``lo..hi`` inclusive."""
    if lo > hi:
        raise EmptyRange(f"empty site range [{lo}, {hi}]")
    if lo < 0 or hi > J.size - 1:
        raise EmptyRange(f"site range [{lo}, {hi}] outside [0, {J.size - 1}]")
    return JacobiMatrix(J.a[lo:hi + 1], J.b[lo:hi])


def qtilde_identity_residual(J: JacobiMatrix, params: PerturbationParams, lam: float) -> float:
    """``Q~_N - Gamma(n) (Q_N + A phi_N P_n)`` at ``lam``.

    ``A = lam (theta^-2 - 1) - M`` and ``Gamma(n) = theta^(2 - k)`` where
    ``k`` is the number of off-diagonal entries touched by the perturbation:
    1 in the interior, ``theta`` at an end site, ``theta^2`` when ``N = 1``.
    Vanishes identically.
    """
    from .perturb import apply_perturbation

    require_jacobi(J)
    n = require_site(J, params.site)
    N = J.size
    Jt = apply_perturbation(J, params)
    lam = float(lam)
    q = float(qn_values(J.a, J.b, lam))
    qt = float(qn_values(Jt.a, Jt.b, lam))
    P = first_kind_table(J.a, J.b, lam)
    phi = second_kind_table(J.a, J.b, n, lam)
    A = lam * (1.0 / params.theta_sq - 1.0) - params.M
    touched = (n > 0) + (n < N - 1)
    gamma = math.sqrt(params.theta_sq) ** (2 - touched)
    return qt - gamma * (q + A * float(phi[-1]) * float(P[n]))
