"""Random forward instances shared by the property and acceptance tests.

Every instance is produced by the forward map: draw ``J``, ``n``, ``theta^2``
and ``K``, perturb, and compute both spectra with the package.  ``K`` is
placed in one of several regimes so that all classification cases occur.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

import oracles
from jacobinv import JacobiMatrix, SpectralData, apply_perturbation, eigenvalues, perturbation_from

KINDS = ("generic", "eigen", "mirror", "zero_weight", "green_zero")


@dataclass(frozen=True)
class Instance:
    kind: str
    J: JacobiMatrix
    site: int
    theta_sq: float
    K: float
    J_tilde: JacobiMatrix
    sigma: tuple
    sigma_hat: tuple

    def data(self, with_theta: bool = True) -> SpectralData:
        return SpectralData(self.sigma, self.sigma_hat, self.K, self.site, self.theta_sq if with_theta else None)

    @property
    def spread(self) -> float:
        return max([1.0] + [abs(x) for x in self.sigma + self.sigma_hat + (self.K,)])


def random_jacobi(rng, N) -> JacobiMatrix:
    return JacobiMatrix(rng.uniform(0.0, 4.0, N), -rng.uniform(0.3, 1.5, N - 1))


def mirror_jacobi(rng, N) -> JacobiMatrix:
    """Jacobi matrix invariant under index reversal."""
    a = rng.uniform(0.0, 4.0, N)
    b = -rng.uniform(0.3, 1.5, N - 1)
    return JacobiMatrix((a + a[::-1]) / 2, (b + b[::-1]) / 2)


def _forward(kind, J, n, theta_sq, K):
    Jt = apply_perturbation(J, perturbation_from(theta_sq, K, n))
    return Instance(kind, J, n, theta_sq, K, Jt, tuple(eigenvalues(J)), tuple(eigenvalues(Jt)))


def _accidental_tie(inst) -> bool:
    """True when two points are close without being a designed coincidence."""
    s = inst.spread
    pts = np.array(inst.sigma + inst.sigma_hat)
    gaps = np.abs(pts[:, None] - pts[None, :])[np.triu_indices(pts.size, 1)]
    floor = 1e-12 * s if inst.kind in ("eigen", "mirror", "zero_weight") else 0.0
    close = (gaps < 1e-6 * s) if floor == 0.0 else (gaps > floor) & (gaps < 1e-6 * s)
    if np.any(close):
        return True
    if inst.kind in ("generic", "mirror"):
        return np.min(np.abs(pts - inst.K)) < 1e-3 * s
    return False


def make_instance(rng, kind: str, N: int | None = None, max_N: int = 10) -> Instance:
    """One forward instance of the given kind; resamples until well posed."""
    for _ in range(1000):
        theta_sq = float(rng.uniform(0.05, 0.95))
        if kind in ("mirror", "zero_weight"):
            size = N if N is not None else int(rng.choice([k for k in range(3, max_N + 1, 2)]))
            if size % 2 == 0 or size < 3:
                raise ValueError("mirror instances need odd N >= 3")
            J = mirror_jacobi(rng, size)
            n = size // 2
        else:
            size = N if N is not None else int(rng.integers(1, max_N + 1))
            J = random_jacobi(rng, size)
            n = int(rng.integers(0, size))
        lam = np.asarray(eigenvalues(J))
        _, w = oracles.site_weights(J.a, J.b, n)
        if kind not in ("mirror", "zero_weight") and np.min(w) < 1e-6:
            # an almost unmovable eigenvalue is a near-tie at tolerance
            continue
        lo, hi = lam[0] - 1.0, lam[-1] + 1.0
        if kind in ("generic", "mirror"):
            K = float(rng.uniform(lo, hi))
        elif kind == "eigen":
            K = float(lam[rng.integers(0, size)])
        elif kind == "zero_weight":
            # antisymmetric eigenvectors vanish at the centre site
            zero = np.flatnonzero(w < 1e-12)
            if zero.size == 0:
                continue
            K = float(lam[rng.choice(zero)])
        elif kind == "green_zero":
            z = oracles.green_zeros(J.a, J.b, n)
            if z.size == 0:
                continue
            K = float(rng.choice(z))
        else:
            raise ValueError(kind)
        inst = _forward(kind, J, n, theta_sq, K)
        if not _accidental_tie(inst):
            return inst
    raise RuntimeError(f"could not draw a well-posed {kind} instance")


def corpus(size: int, seed: int, kinds=KINDS, max_N: int = 10) -> list:
    rng = np.random.default_rng(seed)
    return [make_instance(rng, kinds[i % len(kinds)], max_N=max_N) for i in range(size)]


# ---------------------------------------------------------------------------
# mutations of valid data
# ---------------------------------------------------------------------------

MUTATIONS = ("shift", "swap", "duplicate", "theta_above")


def _strict(x, gap) -> bool:
    return all(v - u > gap for u, v in zip(x[:-1], x[1:]))


def mutate(inst: Instance, how: str, rng):
    """``(sigma, sigma_hat, K, n, theta_sq)`` of a mutant, or ``None`` if not applicable."""
    sig, hat = list(inst.sigma), list(inst.sigma_hat)
    K, n, th = inst.K, inst.site, inst.theta_sq
    N = len(sig)
    if how == "shift":
        j = int(rng.integers(0, N))
        hat[j] += float(rng.choice([-1.0, 1.0])) * 0.01 * inst.spread
    elif how == "swap":
        i, j = int(rng.integers(0, N)), int(rng.integers(0, N))
        sig[i], hat[j] = hat[j], sig[i]
    elif how == "duplicate":
        i = int(rng.integers(0, N))
        j = int(np.argmin(np.abs(np.asarray(hat) - sig[i])))
        if abs(hat[j] - sig[i]) <= 1e-9 * inst.spread:
            return None
        hat[j] = sig[i]
    elif how == "theta_above":
        from jacobinv import rational_N

        try:
            NK = rational_N(sig, hat, K)
        except ZeroDivisionError:
            return None
        if not 0.0 < NK < 0.98:
            return None
        th = float(rng.uniform(NK + 0.01, 0.99))
    else:
        raise ValueError(how)
    sig.sort()
    hat.sort()
    gap = 1e-8 * inst.spread
    if not (_strict(sig, gap) and _strict(hat, gap)):
        return None
    return tuple(sig), tuple(hat), K, n, th
