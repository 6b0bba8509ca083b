"""Reconstruction of every pair ``(J, J~)`` with prescribed spectra.

Pipeline: the data fix the site Green's function ``G`` as a pole/residue form
(:func:`build_ghat`); its zeros are distributed between the left and right
Weyl functions (:func:`enumerate_assignments`), residues at common zeros are
split by parameters ``t`` in ``(0, 1)``, and the two blocks are rebuilt from
their Weyl functions (:func:`assemble_solution`) using

    -1/G(lam) = lam - a_n + b_n^2 m_+(lam) + b_{n-1}^2 m_-(lam).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import _ratio
from .conditions import ConditionsReport, DataClassification, KCase, check_conditions, classify
from .core import (
    DEFAULT_TOL,
    InfeasibleCounts,
    InvalidInput,
    JacobiMatrix,
    NegativeResidue,
    PoleResidueForm,
    SpectralData,
    TolerancePolicy,
    VerificationFailed,
    ZeroBracketFailure,
)
from .eigen import eigenvalues, eigenvector_weights
from .perturb import apply_perturbation, perturbation_from
from .poly import submatrix
from .weyl import Anchor, reconstruct_weyl


@dataclass(frozen=True)
class GHatExpansion:
    """``G`` as poles/residues, its zeros, and the expansion of ``-1/G``.

    ``-1/G(lam) = lam - rec_a + sum_l rec_residues[l] / (zeros[l] - lam)``.
    """

    ghat: PoleResidueForm
    zeros: tuple
    rec_a: float
    rec_residues: tuple
    theta_sq: float
    fixed_zeros: tuple = ()  # indices into zeros that are common poles of m_+ and m_-


@dataclass(frozen=True)
class PoleAssignment:
    minus: tuple  # indices into GHatExpansion.zeros, poles of m_- only
    plus: tuple  # poles of m_+ only
    common: tuple  # poles of both; one split parameter each

    @property
    def dimension(self) -> int:
        return len(self.common)


@dataclass(frozen=True)
class Sample:
    t: tuple
    J: JacobiMatrix
    J_tilde: JacobiMatrix
    spectral_residual: float

    def __iter__(self):
        return iter((self.J, self.J_tilde))


@dataclass(frozen=True)
class SolutionFamily:
    assignment: PoleAssignment
    dimension: int
    count_formula: str
    family_count: int
    samples: tuple
    expansion: GHatExpansion = field(repr=False)
    classification: DataClassification = field(repr=False)
    data: SpectralData = field(repr=False)

    def sample(self, t=(), tol: TolerancePolicy = DEFAULT_TOL) -> Sample:
        """Member of the family at split parameters ``t``."""
        return assemble_solution(self.expansion, self.assignment, t, self.classification, self.data, tol)

    def to_dict(self) -> dict:
        z = self.expansion.zeros
        a = self.assignment
        return {
            "assignment": {
                "minus": [z[i] for i in a.minus],
                "plus": [z[i] for i in a.plus],
                "common": [z[i] for i in a.common],
            },
            "dimension": self.dimension,
            "count_formula": self.count_formula,
            "samples": [
                {
                    "t": list(s.t),
                    "J": s.J.to_dict(),
                    "J_tilde": s.J_tilde.to_dict(),
                    "spectral_residual": s.spectral_residual,
                }
                for s in self.samples
            ],
        }


@dataclass(frozen=True)
class InverseResult:
    report: ConditionsReport
    families: tuple = ()

    def to_dict(self) -> dict:
        return {"report": self.report.to_dict(), "families": [f.to_dict() for f in self.families]}


# ---------------------------------------------------------------------------


def _ghat_zeros(poles: np.ndarray, residues: np.ndarray) -> np.ndarray:
    """One zero of ``sum w/(f - lam)`` in each gap between consecutive poles."""
    if poles.size < 2:
        return np.empty(0)
    lower = poles[:-1].copy()
    upper = poles[1:].copy()
    # G runs from -inf to +inf across each gap and is increasing there
    while True:
        mid = 0.5 * (lower + upper)
        active = (mid > lower) & (mid < upper)
        if not np.any(active):
            break
        g = np.sum(residues / (poles - mid[:, None]), axis=1)
        go_down = (g > 0) & active
        go_up = (g <= 0) & active
        upper = np.where(go_down, mid, upper)
        lower = np.where(go_up, mid, lower)
    z = 0.5 * (lower + upper)
    if np.any(z <= poles[:-1]) or np.any(z >= poles[1:]):
        raise ZeroBracketFailure("zero of G not strictly inside its gap")
    return z


def build_ghat(D: SpectralData, cls: DataClassification, tol: TolerancePolicy = DEFAULT_TOL) -> GHatExpansion:
    """Pole/residue form of the site Green's function determined by the data."""
    if not cls.theta_fixed:
        raise InvalidInput("theta^2 must be fixed to build G")
    theta_sq = float(cls.theta_sq)
    sigma = np.asarray(D.sigma)
    K = D.K
    spread = D.spread()
    atol = tol.atol(spread)
    pairs = _ratio.coincident_pairs(D.sigma, D.sigma_hat, atol)
    paired = {i for i, _ in pairs}
    s_red, h_red = _ratio.reduced(D.sigma, D.sigma_hat, atol)

    poles, alphas = [], []
    for j, lam in enumerate(sigma):
        if j in paired:
            if cls.k_case is not KCase.OUTSIDE and j == cls.K_index:
                alpha = (cls.N_at_K - theta_sq) / (1.0 - theta_sq)
                if cls.k_case is KCase.COMMON_ZERO:
                    continue
                if alpha <= 0:
                    raise NegativeResidue(f"residue at K is {alpha!r}")
                poles.append(lam)
                alphas.append(alpha)
            continue
        others = s_red[s_red != lam]
        beta = np.prod(lam - h_red) / (np.prod(lam - others) * (lam - K))
        alpha = beta / (1.0 - theta_sq)
        if not alpha > 0:
            raise NegativeResidue(f"residue at lambda={lam!r} is {alpha!r}")
        poles.append(lam)
        alphas.append(alpha)

    poles = np.asarray(poles)
    alphas = np.asarray(alphas)
    total = math.fsum(alphas)
    if abs(total - 1.0) > 10 * tol.rel_tol:
        raise VerificationFailed(f"residues of G sum to {total!r}, expected 1", abs(total - 1.0))
    alphas = alphas / total

    zeros = _ghat_zeros(poles, alphas)
    # common zeros: unmovable points, and K in case IV b
    fixed_values = list(cls.mu)
    if cls.k_case is KCase.COMMON_ZERO:
        fixed_values.append(sigma[cls.K_index])
    fixed = []
    for m in fixed_values:
        hit = np.flatnonzero(np.abs(zeros - m) <= atol) if zeros.size else []
        if len(hit) != 1:
            raise VerificationFailed(f"common point {m!r} is not a zero of G")
        fixed.append(int(hit[0]))
    deriv = np.sum(alphas / (poles - zeros[:, None]) ** 2, axis=1) if zeros.size else np.empty(0)
    rec_residues = 1.0 / deriv
    zeros = zeros.copy()
    for i, m in zip(fixed, fixed_values):
        zeros[i] = m
    rec_a = float(np.dot(alphas, poles))
    return GHatExpansion(
        PoleResidueForm(poles, alphas),
        tuple(float(x) for x in zeros),
        rec_a,
        tuple(float(x) for x in rec_residues),
        theta_sq,
        tuple(sorted(fixed)),
    )


def family_count(N: int, n: int, q: int, k_case: KCase) -> tuple:
    """``(top, bottom)`` of the binomial counting the solution manifolds."""
    if k_case is KCase.COMMON_ZERO:
        return N - 2 * q - 3, n - q - 1
    return N - 2 * q - 1, n - q


def enumerate_assignments(exp: GHatExpansion, cls: DataClassification, N: int, n: int) -> list:
    """Every distribution of the non-common zeros between ``m_-`` and ``m_+``.

    Lexicographic order over the index sets assigned to ``m_-``.
    """
    common = exp.fixed_zeros
    free = [i for i in range(len(exp.zeros)) if i not in common]
    n_minus = n - len(common)
    n_plus = (N - 1 - n) - len(common)
    if n_minus < 0 or n_plus < 0 or n_minus + n_plus != len(free):
        raise InfeasibleCounts(
            f"cannot place {len(free)} free zeros as {n_minus} left / {n_plus} right"
        )
    out = []
    for chosen in itertools.combinations(free, n_minus):
        rest = tuple(i for i in free if i not in chosen)
        out.append(PoleAssignment(tuple(chosen), rest, tuple(common)))
    return out


def _side(exp, idx, weights):
    poles = np.array([exp.zeros[i] for i in idx])
    order = np.argsort(poles)
    return poles[order], np.asarray(weights)[order]


def assemble_solution(exp: GHatExpansion, asg: PoleAssignment, t, cls: DataClassification,
                      D: SpectralData, tol: TolerancePolicy = DEFAULT_TOL, verify: bool = True) -> Sample:
    """The pair ``(J, J~)`` for one assignment and split parameters ``t``."""
    t = tuple(float(x) for x in np.atleast_1d(np.asarray(t, dtype=float)))
    if len(t) != asg.dimension:
        raise InvalidInput(f"need {asg.dimension} split parameters, got {len(t)}")
    if any(not (0.0 < x < 1.0) for x in t):
        raise InvalidInput("split parameters must lie strictly inside (0, 1)")
    N, n = D.size, D.site
    beta = np.asarray(exp.rec_residues)

    plus_idx = asg.plus + asg.common
    plus_w = [beta[i] for i in asg.plus] + [x * beta[i] for x, i in zip(t, asg.common)]
    minus_idx = asg.minus + asg.common
    minus_w = [beta[i] for i in asg.minus] + [(1.0 - x) * beta[i] for x, i in zip(t, asg.common)]

    a = [exp.rec_a]
    b = []
    if n > 0:
        bm2 = math.fsum(minus_w)
        f, w = _side(exp, minus_idx, minus_w)
        left = reconstruct_weyl(f, w / bm2, Anchor.LAST, tol)
        a = list(left.a) + a
        b = list(left.b) + [-math.sqrt(bm2)]
    if n < N - 1:
        bp2 = math.fsum(plus_w)
        f, w = _side(exp, plus_idx, plus_w)
        right = reconstruct_weyl(f, w / bp2, Anchor.FIRST, tol)
        a = a + list(right.a)
        b = b + [-math.sqrt(bp2)] + list(right.b)
    J = JacobiMatrix(a, b)
    J_tilde = apply_perturbation(J, perturbation_from(exp.theta_sq, D.K, n))

    s1 = eigenvalues(J, tol)
    s2 = eigenvalues(J_tilde, tol)
    residual = float(max(np.max(np.abs(s1 - np.asarray(D.sigma))), np.max(np.abs(s2 - np.asarray(D.sigma_hat)))))
    if verify and residual > 10 * tol.rel_tol * D.spread():
        raise VerificationFailed(f"reconstructed spectra off by {residual!r}", residual)
    return Sample(t, J, J_tilde, residual)


def _grid(dim: int, samples_per_dim: int) -> list:
    if dim == 0:
        return [()]
    axis = [(k + 1) / (samples_per_dim + 1) for k in range(samples_per_dim)]
    return list(itertools.product(axis, repeat=dim))


def solve_inverse(D: SpectralData, samples_per_dim: int = 3, seed: int = 0, random_samples: int = 0,
                  tol: TolerancePolicy = DEFAULT_TOL) -> InverseResult:
    """All solution families for the data, each with sampled members.

    Samples lie on the grid ``{1/(s+1), ..., s/(s+1)}^dim``; ``random_samples``
    extra points per family are drawn from a generator seeded with ``seed``.
    When the conditions fail the result carries the report and no families.
    """
    report = check_conditions(D, tol)
    if not report.passed:
        return InverseResult(report, ())
    cls = classify(D, tol)
    exp = build_ghat(D, cls, tol)
    N, n = D.size, D.site
    top, bottom = family_count(N, n, cls.q, cls.k_case)
    asgs = enumerate_assignments(exp, cls, N, n)
    if len(asgs) != math.comb(top, bottom):
        raise InfeasibleCounts(f"{len(asgs)} assignments, expected C({top},{bottom})")
    rng = np.random.default_rng(seed)
    families = []
    for asg in asgs:
        ts = _grid(asg.dimension, samples_per_dim)
        if asg.dimension:
            ts += [tuple(rng.uniform(0.0, 1.0, asg.dimension)) for _ in range(random_samples)]
        samples = tuple(assemble_solution(exp, asg, t, cls, D, tol) for t in ts)
        families.append(
            SolutionFamily(asg, asg.dimension, f"C({top},{bottom})", len(asgs), samples, exp, cls, D)
        )
    return InverseResult(report, tuple(families))


def locate_in_family(J: JacobiMatrix, result: InverseResult, tol: TolerancePolicy = DEFAULT_TOL) -> tuple:
    """Index of the family containing ``J`` and its split parameters ``t``.

    The family is identified by the spectrum of the left block ``J[0:n]``;
    ``t`` is the share of each common residue carried by ``m_+``.
    """
    if not result.families:
        raise InvalidInput("no families to search")
    fam0 = result.families[0]
    exp, D = fam0.expansion, fam0.data
    n, N = D.site, D.size
    atol = tol.atol(D.spread()) * 10
    zeros = np.asarray(exp.zeros)
    left = set()
    if n > 0:
        for x in eigenvalues(submatrix(J, 0, n - 1), tol):
            hit = np.flatnonzero(np.abs(zeros - x) <= atol)
            if hit.size != 1:
                raise VerificationFailed(f"left-block eigenvalue {x!r} is not a zero of G")
            left.add(int(hit[0]))
    for k, fam in enumerate(result.families):
        asg = fam.assignment
        if set(asg.minus) | set(asg.common) != left and n > 0:
            continue
        t = []
        if asg.common:
            right = submatrix(J, n + 1, N - 1)
            ws = eigenvector_weights(right, 0, tol)
            bn2 = J.b[n] ** 2
            for i in asg.common:
                j = int(np.argmin(np.abs(np.asarray(ws.values) - zeros[i])))
                t.append(bn2 * ws.weights[j] / exp.rec_residues[i])
        return k, tuple(t)
    raise VerificationFailed("no family matches the left-block spectrum")
