"""Reference computations written independently of the package.

Nothing here imports ``jacobinv``: the functions work on plain arrays and use
dense linear algebra, determinant recurrences or direct case analysis.
"""

from __future__ import annotations

import math

import numpy as np


def dense(a, b) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return np.diag(a) + np.diag(b, 1) + np.diag(b, -1)


def dense_perturbed(a, b, n, theta_sq, K) -> np.ndarray:
    """``Theta (J + M e_n e_n^T) Theta`` with ``Theta = diag(1, .., theta, .., 1)``."""
    J = dense(a, b)
    M = (1.0 / theta_sq - 1.0) * K
    J[n, n] += M
    d = np.ones(len(a))
    d[n] = math.sqrt(theta_sq)
    return d[:, None] * J * d[None, :]


def lapack_eigenvalues(a, b) -> np.ndarray:
    return np.linalg.eigvalsh(dense(a, b))


def leading_minors(a, b, lam) -> list:
    """``det(lam - J_k)`` for the leading ``k x k`` blocks, ``k = 0..N``."""
    D = [1.0, lam - a[0]]
    for k in range(1, len(a)):
        D.append((lam - a[k]) * D[-1] - b[k - 1] ** 2 * D[-2])
    return D


def charpoly_roots(a, b) -> np.ndarray:
    """Roots of ``det(lam - J)`` by sign-change bisection.

    The roots of consecutive leading minors strictly interlace, so the roots
    of minor ``k`` split the real line into ``k + 1`` brackets, each holding
    exactly one root of minor ``k + 1``.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    radius = float(np.max(np.abs(a))) + 2.0 * (float(np.max(np.abs(b))) if b.size else 0.0) + 1.0
    roots = []
    for k in range(1, a.size + 1):
        edges = [-radius] + roots + [radius]
        f = lambda x, k=k: leading_minors(a, b, x)[k]
        new = []
        for lo, hi in zip(edges[:-1], edges[1:]):
            flo = f(lo)
            for _ in range(200):
                mid = 0.5 * (lo + hi)
                if mid <= lo or mid >= hi:
                    break
                fm = f(mid)
                if fm == 0.0:
                    lo = hi = mid
                    break
                if (fm > 0) == (flo > 0):
                    lo, flo = mid, fm
                else:
                    hi = mid
            new.append(0.5 * (lo + hi))
        roots = new
    return np.array(roots)


def green_dense(a, b, n, lam) -> np.ndarray:
    """``e_n^T (J - lam)^{-1} e_n`` by dense solves; ``lam`` an array."""
    J = dense(a, b)
    e = np.zeros(len(a))
    e[n] = 1.0
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    return np.array([np.linalg.solve(J - x * np.eye(len(a)), e)[n] for x in lam])


def site_weights(a, b, n):
    """Eigenvalues and squared eigenvector components at site ``n`` (LAPACK)."""
    w, V = np.linalg.eigh(dense(a, b))
    return w, V[n, :] ** 2


def green_zeros(a, b, n) -> np.ndarray:
    """Zeros of ``G(lam, n, n)``: one per gap between poles of nonzero weight."""
    w, c = site_weights(a, b, n)
    keep = c > 1e-12
    f, g = w[keep], c[keep]
    out = []
    for lo, hi in zip(f[:-1], f[1:]):
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            if np.sum(g / (f - mid)) > 0:
                hi = mid
            else:
                lo = mid
        out.append(0.5 * (lo + hi))
    return np.array(out)


def stiffness_to_jacobi(masses, gammas):
    """``M^{-1/2} C M^{-1/2}`` for the stiffness matrix ``C`` of a chain."""
    m = np.asarray(masses, dtype=float)
    g = np.asarray(gammas, dtype=float)
    N = m.size
    C = np.diag(g[:-1] + g[1:]) - np.diag(g[1:-1], 1) - np.diag(g[1:-1], -1)
    s = 1.0 / np.sqrt(m)
    A = s[:, None] * C * s[None, :]
    return np.diag(A).copy(), np.array([A[i, i + 1] for i in range(N - 1)])


# ---------------------------------------------------------------------------
# existence conditions by direct case analysis
# ---------------------------------------------------------------------------


def first_failed_condition(sigma, sigma_hat, K, n, theta_sq, rel=1e-9):
    """Label of the first violated condition (``None`` when all hold).

    Labels: ``"I"`` interlacing, ``"II"`` equal ratio at unmovable points,
    ``"III"`` K outside both spectra, ``"IV"`` K in one spectrum only,
    ``"IV.a"`` common pole, ``"IV.b"`` common zero.
    """
    sig = sorted(float(x) for x in sigma)
    hat = sorted(float(x) for x in sigma_hat)
    N = len(sig)
    spread = max([1.0] + [abs(x) for x in sig + hat + [K]])
    atol = rel * spread

    def same(x, y):
        return abs(x - y) <= atol

    # --- I
    below = [x for x in sig if x < K and not same(x, K)]
    p = len(below)
    boxes = []
    for j in range(1, p):
        boxes.append(("[)", sig[j - 1], sig[j]))
    if p >= 1:
        boxes.append(("[)", sig[p - 1], K))
    if p < N:
        boxes.append(("{}", K, K) if same(K, sig[p]) else ("(]", K, sig[p]))
    for j in range(p + 1, N):
        boxes.append(("(]", sig[j - 1], sig[j]))

    def inside(x, box):
        kind, lo, hi = box
        if kind == "{}":
            return same(x, lo)
        if kind == "[)":
            return (same(x, lo) or x > lo) and x < hi and not same(x, hi)
        return x > lo and not same(x, lo) and (x < hi or same(x, hi))

    counts = [0] * len(boxes)
    for x in hat:
        for i, box in enumerate(boxes):
            if inside(x, box):
                counts[i] += 1
                break
        else:
            return "I"
    if any(c != 1 for c in counts):
        return "I"

    # --- rational function with common factors cancelled
    free_hat = [y for y in hat if not any(same(y, x) for x in sig)]
    free_sig = [x for x in sig if not any(same(x, y) for y in hat)]

    def ratio(lam):
        return math.prod(lam - y for y in free_hat) / math.prod(lam - x for x in free_sig)

    def ratio_slope(lam):
        v = ratio(lam)
        terms = [1.0 / (lam - y) for y in free_hat] + [-1.0 / (lam - x) for x in free_sig]
        slope = v * sum(terms)
        size = abs(v) * sum(abs(t) for t in terms)
        return slope, size

    common = [x for x in sig if any(same(x, y) for y in hat)]
    mu = [x for x in common if not same(x, K)]
    q = len(mu)
    nt = min(n, N - 1 - n)

    # --- II
    theta = theta_sq
    if q >= 1:
        vals = [ratio(m) for m in mu] + ([theta_sq] if theta_sq is not None else [])
        if any(abs(v - vals[0]) > rel for v in vals) or not 0.0 < vals[0] < 1.0:
            return "II"
        theta = vals[0]
    elif theta is not None and not 0.0 < theta < 1.0:
        return "II"

    in_sig = any(same(K, x) for x in sig)
    in_hat = any(same(K, y) for y in hat)

    # --- III
    if not in_sig and not in_hat:
        if q > nt:
            return "III"
        if theta is not None and abs(ratio(K) - theta) > rel:
            return "III"
        return None

    # --- IV
    if not (in_sig and in_hat):
        return "IV"
    NK = ratio(K)
    slope, size = ratio_slope(K)
    flat = abs(slope) <= rel * max(size, 1.0 / spread)
    if theta is None:
        return None if NK > 0 else "IV.a"
    if NK > theta + rel:
        return None if q <= nt else "IV.a"
    if abs(NK - theta) <= rel:
        return None if flat and q < nt else "IV.b"
    return "IV.a"


# ---------------------------------------------------------------------------
# Krylov reference for tiny measures
# ---------------------------------------------------------------------------


def lanczos_dense(poles, weights):
    """Jacobi matrix of a measure via QR of its Krylov basis.

    The Krylov basis of ``diag(poles)`` started at ``sqrt(weights)`` is
    ill-conditioned, so this is only suitable for very small measures.
    """
    f = np.asarray(poles, dtype=float)
    w = np.asarray(weights, dtype=float)
    w = w / w.sum()
    K = np.column_stack([f ** k * np.sqrt(w) for k in range(f.size)])
    Q, R = np.linalg.qr(K)
    Q = Q * np.sign(np.diag(R))[None, :]
    T = Q.T @ np.diag(f) @ Q
    return np.diag(T).copy(), -np.abs(np.diag(T, 1))
