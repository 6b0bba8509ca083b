"""Classification of spectral data and the existence conditions I-IV.

Given two spectra, the perturbation constant ``K`` and the site ``n``, a pair
``(J, J~)`` with those spectra exists iff

I.   the spectra interlace around ``K`` (one perturbed eigenvalue per interval);
II.  ``theta^2 = N(mu_1) = ... = N(mu_q)`` lies in ``(0, 1)``, where the
     ``mu`` are the common points other than ``K``;
III. if ``K`` is in neither spectrum: ``q <= min(n, N-n-1)`` and ``N(K) = theta^2``;
IV.  if ``K`` is in either spectrum it is in both, and either
     (a) ``q <= min(n, N-n-1)`` and ``N(K) > theta^2``, or
     (b) ``q < min(n, N-n-1)``, ``N(K) = theta^2`` and ``N'(K) = 0``.

Here ``N`` is the ratio of the characteristic polynomials (perturbed over
unperturbed) written in terms of the two spectra.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from . import _ratio
from .core import (
    DEFAULT_TOL,
    AmbiguousClassification,
    MissingTheta,
    SpectralData,
    TolerancePolicy,
    require_spectral_data,
)


class KCase(str, enum.Enum):
    OUTSIDE = "KOutside"
    COMMON_POLE = "KCommonPole"  # IV a
    COMMON_ZERO = "KCommonZero"  # IV b


@dataclass(frozen=True)
class AdmissibleInterval:
    """Open interval of admissible ``theta^2`` when it is a free parameter."""

    lo: float
    hi: float

    def __contains__(self, x):
        return self.lo < x < self.hi

    def to_dict(self):
        return {"open_interval": [self.lo, self.hi]}


@dataclass(frozen=True)
class DataClassification:
    p: int
    mu: tuple
    q: int
    k_case: KCase
    theta_sq: object  # float or AdmissibleInterval
    n_tilde: int
    N_at_K: float | None = None
    dN_at_K: float | None = None
    K_index: int | None = None  # 0-based index of K in sigma when K is common

    @property
    def theta_fixed(self) -> bool:
        return not isinstance(self.theta_sq, AdmissibleInterval)

    def to_dict(self) -> dict:
        th = self.theta_sq.to_dict() if isinstance(self.theta_sq, AdmissibleInterval) else self.theta_sq
        return {
            "p": self.p,
            "mu": list(self.mu),
            "q": self.q,
            "k_case": self.k_case.value if self.k_case else None,
            "theta_sq": th,
            "n_tilde": self.n_tilde,
            "N_at_K": self.N_at_K,
            "dN_at_K": self.dN_at_K,
        }


@dataclass(frozen=True)
class Bucket:
    label: str
    lo: float
    hi: float
    count: int


@dataclass(frozen=True)
class InterlacingReport:
    passed: bool
    p: int
    buckets: tuple
    unassigned: tuple = ()

    def to_dict(self) -> dict:
        return {
            "pass": self.passed,
            "p": self.p,
            "intervals": [
                {"interval": b.label, "lo": b.lo, "hi": b.hi, "count": b.count} for b in self.buckets
            ],
            "unassigned": list(self.unassigned),
        }


@dataclass(frozen=True)
class ConditionResult:
    passed: bool
    applicable: bool = True
    detail: str = ""
    label: str = ""

    def to_dict(self) -> dict:
        return {"pass": self.passed, "applicable": self.applicable, "detail": self.detail, "label": self.label}


@dataclass(frozen=True)
class ConditionsReport:
    passed: bool
    conditions: dict
    classification: DataClassification | None
    interlacing: InterlacingReport
    first_failed: str | None = None
    notes: tuple = field(default=())

    def to_dict(self) -> dict:
        return {
            "pass": self.passed,
            "first_failed": self.first_failed,
            "conditions": {k: v.to_dict() for k, v in self.conditions.items()},
            "classification": self.classification.to_dict() if self.classification else None,
            "interlacing": self.interlacing.to_dict(),
            "notes": list(self.notes),
        }


# ---------------------------------------------------------------------------


def _count_below(values, x, atol):
    return sum(1 for v in values if v < x - atol)


def _snap(x, anchors, atol):
    for y in anchors:
        if abs(x - y) <= atol:
            return y
    return x


def check_interlacing(D: SpectralData, tol: TolerancePolicy = DEFAULT_TOL) -> InterlacingReport:
    """Count perturbed eigenvalues in each interlacing interval around ``K``.

    Intervals (1-based ``lam_1 < ... < lam_N``, ``lam_p < K <= lam_{p+1}``):
    ``[lam_j, lam_{j+1})`` for ``j < p``, ``[lam_p, K)``, ``(K, lam_{p+1}]``
    (when nonempty), ``(lam_j, lam_{j+1}]`` for ``j > p``.  When ``K`` equals
    ``lam_{p+1}`` the point ``K`` itself must carry one perturbed eigenvalue.
    """
    require_spectral_data(D, tol)
    lam = list(D.sigma)
    N = len(lam)
    atol = tol.atol(D.spread())
    p = _count_below(lam, D.K, atol)
    K = _snap(D.K, lam, atol)
    K_tied = p < N and lam[p] == K
    pts = [_snap(x, lam + [K], atol) for x in D.sigma_hat]

    # bucket i -> predicate; lam below is 0-based, so lam_j == lam[j-1]
    buckets = []
    for j in range(1, p):
        lo, hi = lam[j - 1], lam[j]
        buckets.append((f"[lambda_{j}, lambda_{j + 1})", lo, hi, lambda x, lo=lo, hi=hi: lo <= x < hi))
    if p >= 1:
        lo = lam[p - 1]
        buckets.append((f"[lambda_{p}, K)", lo, K, lambda x, lo=lo: lo <= x < K))
    if K_tied:
        buckets.append(("{K}", K, K, lambda x: x == K))
    elif p < N:
        hi = lam[p]
        buckets.append((f"(K, lambda_{p + 1}]", K, hi, lambda x, hi=hi: K < x <= hi))
    for j in range(p + 1, N):
        lo, hi = lam[j - 1], lam[j]
        buckets.append((f"(lambda_{j}, lambda_{j + 1}]", lo, hi, lambda x, lo=lo, hi=hi: lo < x <= hi))

    counts = [0] * len(buckets)
    unassigned = []
    for x, orig in zip(pts, D.sigma_hat):
        for i, (_, _, _, pred) in enumerate(buckets):
            if pred(x):
                counts[i] += 1
                break
        else:
            unassigned.append(orig)
    out = tuple(Bucket(lbl, lo, hi, c) for (lbl, lo, hi, _), c in zip(buckets, counts))
    passed = all(c == 1 for c in counts) and not unassigned
    return InterlacingReport(passed, p, out, tuple(unassigned))


@dataclass
class _Analysis:
    spread: float
    atol: float
    p: int
    mu: list
    q: int
    n_tilde: int
    K_in_sigma: bool
    K_in_hat: bool
    K_common: bool
    K_index: int | None
    N_at_K: float | None
    dN_at_K: float | None
    dN_scale: float | None
    N_at_mu: list
    theta_sq: object
    theta_source: str
    k_case: KCase | None
    issue: tuple | None  # (label, message)


def _analyze(D: SpectralData, tol: TolerancePolicy) -> _Analysis:
    sigma, hat = D.sigma, D.sigma_hat
    N = len(sigma)
    spread = D.spread()
    atol = tol.atol(spread)
    pairs = _ratio.coincident_pairs(sigma, hat, atol)
    common = [sigma[i] for i, _ in pairs]
    K = D.K
    K_in_sigma = any(abs(K - x) <= atol for x in sigma)
    K_in_hat = any(abs(K - x) <= atol for x in hat)
    K_common = any(abs(K - x) <= atol for x in common)
    K_index = next((i for i, _ in pairs if abs(sigma[i] - K) <= atol), None)
    mu = [x for x in common if abs(x - K) > atol]
    q = len(mu)
    n_tilde = min(D.site, N - D.site - 1)
    p = _count_below(sigma, K, atol)

    N_at_K = dN = dN_scale = None
    if not (K_in_sigma and not K_common):
        N_at_K = _ratio.ratio(sigma, hat, K, atol)
        dN = _ratio.ratio_derivative(sigma, hat, K, atol)
        dN_scale = _ratio.derivative_scale(sigma, hat, K, atol)
    N_at_mu = [_ratio.ratio(sigma, hat, m, atol) for m in mu]
    dN_zero = dN is not None and abs(dN) <= tol.rel_tol * max(dN_scale, 1.0 / spread)

    issue = None
    if q >= 1:
        theta_sq, source = N_at_mu[0], "N(mu_1)"
    elif D.theta_sq is not None:
        theta_sq, source = D.theta_sq, "supplied"
    elif not K_in_sigma and not K_in_hat:
        theta_sq, source = N_at_K, "N(K)"
    elif K_common and dN_zero and n_tilde > 0:
        theta_sq, source = N_at_K, "N(K), N'(K)=0"
    elif K_common:
        theta_sq, source = AdmissibleInterval(0.0, min(N_at_K, 1.0)), "free in (0, N(K))"
    else:
        theta_sq, source = None, "undetermined"

    k_case = None
    if not K_in_sigma and not K_in_hat:
        k_case = KCase.OUTSIDE
    elif not K_common:
        issue = ("IV", "K lies in one spectrum but not in both")
    elif isinstance(theta_sq, AdmissibleInterval):
        k_case = KCase.COMMON_POLE
    elif N_at_K > theta_sq + tol.rel_tol:
        k_case = KCase.COMMON_POLE
    elif abs(N_at_K - theta_sq) <= tol.rel_tol:
        if dN_zero:
            k_case = KCase.COMMON_ZERO
        else:
            issue = ("IV.b", "N(K) = theta^2 but N'(K) != 0")
    else:
        issue = ("IV.a", f"N(K)={N_at_K:.17g} < theta^2={theta_sq:.17g}")

    return _Analysis(
        spread, atol, p, mu, q, n_tilde, K_in_sigma, K_in_hat, K_common, K_index,
        N_at_K, dN, dN_scale, N_at_mu, theta_sq, source, k_case, issue,
    )


def _classification(an: _Analysis) -> DataClassification:
    return DataClassification(
        an.p, tuple(an.mu), an.q, an.k_case, an.theta_sq, an.n_tilde, an.N_at_K, an.dN_at_K, an.K_index
    )


def classify(D: SpectralData, tol: TolerancePolicy = DEFAULT_TOL) -> DataClassification:
    """Unmovable points, ``p``, the ``K`` case and ``theta^2`` for validated data.

    Raises :class:`AmbiguousClassification` when ``N(K) < theta^2`` (or ``K``
    does not fit any case) and :class:`MissingTheta` when ``theta^2`` is a
    free parameter that was not supplied.
    """
    require_spectral_data(D, tol)
    an = _analyze(D, tol)
    if an.issue is not None:
        raise AmbiguousClassification(f"{an.issue[0]}: {an.issue[1]}")
    if isinstance(an.theta_sq, AdmissibleInterval):
        raise MissingTheta(
            f"theta^2 is free in (0, {an.N_at_K:.17g}); supply it to select a solution set"
        )
    return _classification(an)


def check_conditions(D: SpectralData, tol: TolerancePolicy = DEFAULT_TOL) -> ConditionsReport:
    """Evaluate conditions I-IV; overall pass iff every applicable one holds."""
    require_spectral_data(D, tol)
    inter = check_interlacing(D, tol)
    an = _analyze(D, tol)
    rt = tol.rel_tol
    notes = []
    conds = {}

    if inter.passed:
        conds["I"] = ConditionResult(True, detail="interlacing holds", label="I")
    else:
        bad = [f"{b.label}: {b.count}" for b in inter.buckets if b.count != 1]
        if inter.unassigned:
            bad.append(f"outside all intervals: {list(inter.unassigned)}")
        conds["I"] = ConditionResult(False, detail="; ".join(bad), label="I")

    # II
    th = an.theta_sq
    if th is None:
        conds["II"] = ConditionResult(True, applicable=False, detail="theta^2 undetermined", label="II")
    else:
        chain = list(an.N_at_mu)
        if D.theta_sq is not None and an.q >= 1:
            chain.append(D.theta_sq)
        ref = chain[0] if chain else None
        equal = all(abs(v - ref) <= rt for v in chain) if chain else True
        if isinstance(th, AdmissibleInterval):
            in_range = th.hi > 0.0
        else:
            in_range = 0.0 < th < 1.0
        ok = equal and in_range
        detail = f"theta^2 from {an.theta_source}: {th if isinstance(th, AdmissibleInterval) else f'{th:.17g}'}"
        if not equal:
            detail += "; N(mu_l) values (and supplied theta^2) disagree: " + ", ".join(f"{v:.17g}" for v in chain)
        if not in_range:
            detail += "; theta^2 not in (0,1)"
        conds["II"] = ConditionResult(ok, detail=detail, label="II")

    # III
    if an.K_in_sigma or an.K_in_hat:
        conds["III"] = ConditionResult(True, applicable=False, detail="K in sigma or sigma_hat", label="III")
    else:
        msgs = []
        ok = True
        if an.q > an.n_tilde:
            ok = False
            msgs.append(f"q={an.q} > min(n, N-n-1)={an.n_tilde}")
        if isinstance(th, float) and abs(an.N_at_K - th) > rt:
            ok = False
            msgs.append(f"N(K)={an.N_at_K:.17g} != theta^2={th:.17g}")
        conds["III"] = ConditionResult(ok, detail="; ".join(msgs) or "holds", label="III")

    # IV
    if not (an.K_in_sigma or an.K_in_hat):
        conds["IV"] = ConditionResult(True, applicable=False, detail="K outside both spectra", label="IV")
    elif not an.K_common:
        conds["IV"] = ConditionResult(False, detail="K in one spectrum only", label="IV")
    elif an.issue is not None:
        conds["IV"] = ConditionResult(False, detail=an.issue[1], label=an.issue[0])
    elif an.k_case is KCase.COMMON_POLE:
        ok = an.q <= an.n_tilde
        conds["IV"] = ConditionResult(
            ok, detail="case a" + ("" if ok else f": q={an.q} > {an.n_tilde}"), label="IV.a"
        )
    else:
        ok = an.q < an.n_tilde
        conds["IV"] = ConditionResult(
            ok, detail="case b" + ("" if ok else f": q={an.q} >= {an.n_tilde}"), label="IV.b"
        )

    if an.N_at_K is not None and not (0.0 < an.N_at_K < 1.0 + rt):
        notes.append(f"N(K)={an.N_at_K:.17g} outside (0,1)")

    first = next((c.label for c in conds.values() if not c.passed), None)
    passed = first is None
    cls = _classification(an) if an.k_case is not None else None
    return ConditionsReport(passed, conds, cls, inter, first, tuple(notes))


def first_failed_group(report: ConditionsReport) -> str | None:
    """``'I'``, ``'II'``, ``'III'`` or ``'IV'`` for the first failed condition."""
    if report.first_failed is None:
        return None
    return report.first_failed.split(".")[0]


def n_tilde(n: int, N: int) -> int:
    return min(n, N - n - 1)


def binomial(a: int, b: int) -> int:
    return math.comb(a, b) if 0 <= b <= a else 0
