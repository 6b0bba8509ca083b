"""Jacobi matrices from Weyl functions ``m(lam) = sum_i g_i / (f_i - lam)``.

:func:`reconstruct_weyl` runs the Stieltjes procedure (Lanczos on the
discrete measure ``{(f_i, g_i)}`` with full reorthogonalization).
:func:`euclid_continued_fraction` is the exact-rational counterpart: repeated
polynomial division of ``-1/m`` yields the continued fraction

    -1/m(lam) = lam - a_0 - b_0^2 / (lam - a_1 - b_1^2 / (lam - a_2 - ...))

that is ``-1/m = lam - a_0 + b_0^2 m_1`` with ``m_1`` the Weyl function of
the matrix with its first row and column removed.  It is used to cross-check
the floating-point route on small inputs.
"""

from __future__ import annotations

import enum
from fractions import Fraction

import numpy as np

from .core import DEFAULT_TOL, InvalidInput, JacobiMatrix, MeasureDegenerate, TolerancePolicy


class Anchor(str, enum.Enum):
    FIRST = "AnchorFirst"
    LAST = "AnchorLast"


def _measure(poles, residues, tol):
    f = np.asarray(poles, dtype=float)
    w = np.asarray(residues, dtype=float)
    if f.size == 0 or f.size != w.size:
        raise InvalidInput("need matching, nonempty poles and residues")
    if np.any(w <= 0):
        raise InvalidInput("residues must be positive")
    total = float(np.sum(w))
    if abs(total - 1.0) > max(tol.rel_tol, 1e-12) * 10:
        raise InvalidInput(f"residues sum to {total!r}, expected 1")
    order = np.argsort(f, kind="stable")
    f, w = f[order], w[order] / total
    atol = tol.atol(TolerancePolicy.spread(f))
    if np.any(np.diff(f) <= atol):
        raise MeasureDegenerate("two poles coincide at tolerance")
    return f, w


def reconstruct_weyl(poles, residues, orientation=Anchor.FIRST, tol: TolerancePolicy = DEFAULT_TOL) -> JacobiMatrix:
    """The unique Jacobi matrix (negative off-diagonal) with the given Weyl function.

    With ``Anchor.FIRST`` the Weyl function is the Green's function at site 0,
    with ``Anchor.LAST`` at the last site.
    """
    f, w = _measure(poles, residues, tol)
    M = f.size
    Q = np.zeros((M, M))
    Q[:, 0] = np.sqrt(w)
    a = np.empty(M)
    beta = np.empty(max(M - 1, 0))
    scale = max(1.0, float(np.max(np.abs(f))))
    for j in range(M):
        v = f * Q[:, j]
        a[j] = Q[:, j] @ v
        if j == M - 1:
            break
        v -= a[j] * Q[:, j]
        if j > 0:
            v -= beta[j - 1] * Q[:, j - 1]
        for _ in range(2):
            v -= Q[:, : j + 1] @ (Q[:, : j + 1].T @ v)
        beta[j] = np.linalg.norm(v)
        if beta[j] <= 1e3 * np.finfo(float).eps * scale:
            raise MeasureDegenerate("Stieltjes procedure broke down; poles nearly coincide")
        Q[:, j + 1] = v / beta[j]
    J = JacobiMatrix(a, -beta)
    return J.reversed() if Anchor(orientation) is Anchor.LAST else J


# ---------------------------------------------------------------------------
# exact oracle
# ---------------------------------------------------------------------------


def _pmul(p, q):
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, x in enumerate(p):
        for j, y in enumerate(q):
            out[i + j] += x * y
    return out


def _padd(p, q):
    n = max(len(p), len(q))
    return [(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)]


def _trim(p):
    while len(p) > 1 and p[-1] == 0:
        p = p[:-1]
    return p


def _pdivmod(num, den):
    num = list(num)
    quo = [Fraction(0)] * max(len(num) - len(den) + 1, 1)
    while len(num) >= len(den) and any(num):
        c = num[-1] / den[-1]
        k = len(num) - len(den)
        quo[k] = c
        for i, d in enumerate(den):
            num[i + k] -= c * d
        num = _trim(num[:-1]) if len(num) > 1 else num
    return quo, _trim(num)


def euclid_continued_fraction(poles, residues) -> tuple:
    """Exact ``(a_0..a_{M-1}, b_0^2..b_{M-2}^2)`` as Fractions.

    ``poles`` and ``residues`` may be floats (converted exactly) or Fractions.
    Residues are normalized to sum to 1.
    """
    f = [Fraction(x) for x in poles]
    g = [Fraction(x) for x in residues]
    total = sum(g)
    g = [x / total for x in g]
    M = len(f)
    # m = P / Q with Q = prod(f_i - lam), P = sum_i g_i prod_{j != i}(f_j - lam)
    Q = [Fraction(1)]
    for x in f:
        Q = _pmul(Q, [x, Fraction(-1)])
    P = [Fraction(0)]
    for i in range(M):
        term = [g[i]]
        for j in range(M):
            if j != i:
                term = _pmul(term, [f[j], Fraction(-1)])
        P = _padd(P, term)
    P = _trim(P)
    diag, off2 = [], []
    for step in range(M):
        quo, rem = _pdivmod([-c for c in Q], P)
        # quo = lam - a
        if len(quo) != 2 or quo[1] != 1:
            raise ArithmeticError("continued fraction step is not monic of degree 1")
        diag.append(-quo[0])
        if step == M - 1:
            break
        # rem / P = b^2 m_next with m_next ~ -1/lam at infinity
        b2 = -rem[-1] / P[-1]
        off2.append(b2)
        P, Q = [c / b2 for c in rem], P
    return diag, off2


def euclid_reconstruct(poles, residues, orientation=Anchor.FIRST) -> JacobiMatrix:
    """Floating-point Jacobi matrix from the exact continued fraction."""
    diag, off2 = euclid_continued_fraction(poles, residues)
    J = JacobiMatrix([float(x) for x in diag], [-float(np.sqrt(float(x))) for x in off2])
    return J.reversed() if Anchor(orientation) is Anchor.LAST else J
