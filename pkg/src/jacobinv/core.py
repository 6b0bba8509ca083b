"""Domain types, validation, tolerance policy and serialization.

All types are frozen dataclasses holding tuples of floats, so instances are
hashable values that can be shared freely.  Numerical routines convert to
numpy arrays on entry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np


# ---------------------------------------------------------------------------
# Errors
# ---------------------------------------------------------------------------


class JacobiError(Exception):
    """Base class for every error raised by this package."""


class InvalidInput(JacobiError, ValueError):
    """Input violates a documented precondition."""

    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = tuple(violations)


class InvalidTheta(InvalidInput):
    pass


class EmptyRange(InvalidInput):
    pass


class BreakdownAtPivot(JacobiError, ArithmeticError):
    """A Sturm/LDL^T pivot was exactly zero."""


class NonSimpleSpectrum(JacobiError, ArithmeticError):
    pass


class PoleAtPoint(JacobiError, ZeroDivisionError):
    pass


class PoleAtK(PoleAtPoint):
    pass


class AmbiguousClassification(JacobiError, ValueError):
    pass


class MissingTheta(JacobiError, ValueError):
    pass


class NegativeResidue(JacobiError, ArithmeticError):
    pass


class ZeroBracketFailure(JacobiError, ArithmeticError):
    pass


class InfeasibleCounts(JacobiError, ValueError):
    pass


class MeasureDegenerate(JacobiError, ValueError):
    pass


class VerificationFailed(JacobiError, ArithmeticError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class InvalidSystem(InvalidInput):
    pass


class NotRealizable(JacobiError, ValueError):
    def __init__(self, index, message=None):
        super().__init__(message or f"chain not realizable: gamma_{index} <= 0")
        self.index = index


# ---------------------------------------------------------------------------
# Tolerances
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TolerancePolicy:
    """Tie rule and bisection width used throughout the package.

    Two spectral points ``x`` and ``y`` are considered equal when
    ``|x - y| <= rel_tol * spread`` where ``spread = max(1, max|value|)`` is
    taken over every point of the problem at hand.
    """

    rel_tol: float = 1e-9
    eigen_tol: float = 1e-12

    def __post_init__(self):
        if not (0.0 < self.eigen_tol <= self.rel_tol < 1.0):
            raise InvalidInput(
                f"need 0 < eigen_tol <= rel_tol < 1, got {self.eigen_tol}, {self.rel_tol}"
            )

    @staticmethod
    def spread(*groups) -> float:
        s = 1.0
        for g in groups:
            if g is None:
                continue
            arr = np.abs(np.atleast_1d(np.asarray(g, dtype=float)))
            if arr.size:
                s = max(s, float(arr.max()))
        return s

    def atol(self, spread: float) -> float:
        return self.rel_tol * spread

    def close(self, x: float, y: float, spread: float) -> bool:
        return abs(x - y) <= self.rel_tol * spread


DEFAULT_TOL = TolerancePolicy()


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------


def _floats(values) -> tuple:
    return tuple(float(v) for v in values)


@dataclass(frozen=True)
class JacobiMatrix:
    """Symmetric tridiagonal matrix with diagonal ``a`` and off-diagonal ``b``.

    Construction does not validate; use :func:`validate_jacobi` or
    :func:`require_jacobi`.
    """

    a: tuple
    b: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "a", _floats(self.a))
        object.__setattr__(self, "b", _floats(self.b))

    @property
    def size(self) -> int:
        return len(self.a)

    @property
    def diag(self) -> np.ndarray:
        return np.array(self.a)

    @property
    def offdiag(self) -> np.ndarray:
        return np.array(self.b)

    def to_dense(self) -> np.ndarray:
        m = np.diag(self.diag)
        if self.size > 1:
            m += np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)
        return m

    def reversed(self) -> "JacobiMatrix":
        return JacobiMatrix(self.a[::-1], self.b[::-1])

    def to_dict(self) -> dict:
        return {"n": self.size, "a": list(self.a), "b": list(self.b)}

    @classmethod
    def from_dict(cls, d: dict) -> "JacobiMatrix":
        for key in ("a", "b"):
            if key not in d:
                raise InvalidInput(f"matrix JSON missing field '{key}'", [f"missing field '{key}'"])
        try:
            J = cls(d["a"], d["b"])
        except (TypeError, ValueError) as exc:
            raise InvalidInput(f"matrix JSON field 'a'/'b' not numeric: {exc}") from exc
        if "n" in d and d["n"] != J.size:
            raise InvalidInput(
                f"matrix JSON field 'n'={d['n']} does not match len(a)={J.size}",
                ["field 'n' does not match length(a)"],
            )
        return J


@dataclass(frozen=True)
class PerturbationParams:
    """Interior perturbation at ``site``: mass ratio ``theta_sq``, ``K`` and ``M``."""

    site: int
    theta_sq: float
    K: float
    M: float

    @property
    def theta(self) -> float:
        return math.sqrt(self.theta_sq)


@dataclass(frozen=True)
class SpectralData:
    """Input of the inverse problem."""

    sigma: tuple
    sigma_hat: tuple
    K: float
    site: int
    theta_sq: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "sigma", _floats(self.sigma))
        object.__setattr__(self, "sigma_hat", _floats(self.sigma_hat))
        object.__setattr__(self, "K", float(self.K))
        if self.theta_sq is not None:
            object.__setattr__(self, "theta_sq", float(self.theta_sq))

    @property
    def size(self) -> int:
        return len(self.sigma)

    def spread(self) -> float:
        return TolerancePolicy.spread(self.sigma, self.sigma_hat, [self.K])

    def with_theta(self, theta_sq: float | None) -> "SpectralData":
        return SpectralData(self.sigma, self.sigma_hat, self.K, self.site, theta_sq)

    def to_dict(self) -> dict:
        return {
            "sigma": list(self.sigma),
            "sigma_hat": list(self.sigma_hat),
            "K": self.K,
            "n": self.site,
            "theta_sq": self.theta_sq,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SpectralData":
        for key in ("sigma", "sigma_hat", "K", "n"):
            if key not in d:
                raise InvalidInput(f"spectral data JSON missing field '{key}'", [f"missing field '{key}'"])
        if isinstance(d["n"], bool) or not isinstance(d["n"], int):
            raise InvalidInput("spectral data field 'n' must be an integer", ["field 'n' not an integer"])
        try:
            return cls(d["sigma"], d["sigma_hat"], d["K"], d["n"], d.get("theta_sq"))
        except (TypeError, ValueError) as exc:
            raise InvalidInput(f"spectral data JSON not numeric: {exc}") from exc


@dataclass(frozen=True)
class PoleResidueForm:
    """Rational function ``sum_i residues[i] / (poles[i] - lam)``."""

    poles: tuple
    residues: tuple

    def __post_init__(self):
        object.__setattr__(self, "poles", _floats(self.poles))
        object.__setattr__(self, "residues", _floats(self.residues))
        if len(self.poles) != len(self.residues):
            raise InvalidInput("poles and residues differ in length")

    def __len__(self):
        return len(self.poles)

    def __call__(self, lam):
        f = np.asarray(self.poles)
        w = np.asarray(self.residues)
        lam = np.asarray(lam, dtype=float)
        return np.sum(w / (f - lam[..., None]), axis=-1)

    def derivative(self, lam):
        f = np.asarray(self.poles)
        w = np.asarray(self.residues)
        lam = np.asarray(lam, dtype=float)
        return np.sum(w / (f - lam[..., None]) ** 2, axis=-1)

    def total(self) -> float:
        return math.fsum(self.residues)

    def violations(self, tol: TolerancePolicy = DEFAULT_TOL, normalized: bool = True) -> list:
        out = []
        if any(r <= 0 for r in self.residues):
            out.append("residues must be positive")
        if any(y <= x for x, y in zip(self.poles, self.poles[1:])):
            out.append("poles must be strictly increasing")
        if normalized and self.residues and abs(self.total() - 1.0) > tol.rel_tol:
            out.append("residues must sum to 1")
        return out


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


def validate_jacobi(J: JacobiMatrix) -> ValidationReport:
    out = []
    N = J.size
    if N < 1:
        out.append("size must be >= 1")
    if len(J.b) != max(N - 1, 0):
        out.append("length(b) != N-1")
    if not all(math.isfinite(x) for x in J.a + J.b):
        out.append("entries must be finite")
    if any(not (x < 0) for x in J.b):
        out.append("offdiag must be negative")
    return ValidationReport(tuple(out))


def require_jacobi(J: JacobiMatrix) -> JacobiMatrix:
    report = validate_jacobi(J)
    if not report.ok:
        raise InvalidInput("invalid Jacobi matrix: " + "; ".join(report.violations), report.violations)
    return J


def require_site(J_or_size, n: int) -> int:
    N = J_or_size if isinstance(J_or_size, int) else J_or_size.size
    if isinstance(n, bool) or int(n) != n or not (0 <= n <= N - 1):
        raise InvalidInput(f"site n={n} outside [0, {N - 1}]", ["n out of range"])
    return int(n)


def _strictly_increasing_violation(values: Sequence[float], atol: float) -> bool:
    return any(not (y - x > atol) for x, y in zip(values, values[1:]))


def validate_spectral_data(D: SpectralData, tol: TolerancePolicy = DEFAULT_TOL) -> ValidationReport:
    out = []
    if not all(math.isfinite(x) for x in D.sigma + D.sigma_hat + (D.K,)):
        out.append("values must be finite")
        return ValidationReport(tuple(out))
    atol = tol.atol(D.spread())
    if len(D.sigma) == 0:
        out.append("sigma must be nonempty")
    if len(D.sigma) != len(D.sigma_hat):
        out.append("sigma and sigma_hat differ in size")
    if _strictly_increasing_violation(D.sigma, atol):
        out.append("sigma: spectrum not strictly increasing at tolerance")
    if _strictly_increasing_violation(D.sigma_hat, atol):
        out.append("sigma_hat: spectrum not strictly increasing at tolerance")
    if not (0 <= D.site <= len(D.sigma) - 1):
        out.append("n out of range")
    if D.theta_sq is not None and not (0.0 < D.theta_sq < 1.0):
        out.append("thetaSq out of (0,1)")
    return ValidationReport(tuple(out))


def require_spectral_data(D: SpectralData, tol: TolerancePolicy = DEFAULT_TOL) -> SpectralData:
    report = validate_spectral_data(D, tol)
    if not report.ok:
        raise InvalidInput("invalid spectral data: " + "; ".join(report.violations), report.violations)
    return D


# ---------------------------------------------------------------------------
# Canonical fixtures
# ---------------------------------------------------------------------------

_R2 = math.sqrt(2.0)
_R3 = math.sqrt(3.0)

J_A = JacobiMatrix([2.0, 2.0], [-1.0])
J_B = JacobiMatrix([2.0, 2.0, 2.0], [-1.0, -1.0])


@dataclass(frozen=True)
class Fixture:
    name: str
    J: JacobiMatrix
    site: int
    theta_sq: float
    K: float
    J_tilde: JacobiMatrix
    sigma: tuple
    sigma_hat: tuple
    notes: str = field(default="", compare=False)

    def data(self, with_theta: bool = True) -> SpectralData:
        return SpectralData(
            self.sigma, self.sigma_hat, self.K, self.site, self.theta_sq if with_theta else None
        )


FIXTURES = {
    "A": Fixture(
        "A", J_A, 0, 0.5, 0.0,
        JacobiMatrix([1.0, 2.0], [-_R2 / 2]),
        (1.0, 3.0), ((3 - _R3) / 2, (3 + _R3) / 2),
        "K outside both spectra, q=0",
    ),
    "B": Fixture(
        "B", J_B, 1, 0.5, -1.0,
        JacobiMatrix([2.0, 0.5, 2.0], [-_R2 / 2, -_R2 / 2]),
        (2 - _R2, 2.0, 2 + _R2), (0.0, 2.0, 2.5),
        "K outside both spectra, q=1, unmovable 2",
    ),
    "C": Fixture(
        "C", J_B, 1, 0.5, 2.0,
        JacobiMatrix([2.0, 2.0, 2.0], [-_R2 / 2, -_R2 / 2]),
        (2 - _R2, 2.0, 2 + _R2), (1.0, 2.0, 3.0),
        "K common zero of G (case IV b), q=0",
    ),
    "D": Fixture(
        "D", J_A, 0, 0.5, 1.0,
        JacobiMatrix([1.5, 2.0], [-_R2 / 2]),
        (1.0, 3.0), (1.0, 2.5),
        "K common pole (case IV a), q=0",
    ),
}


def as_array(values: Iterable[float]) -> np.ndarray:
    return np.asarray(list(values) if not isinstance(values, np.ndarray) else values, dtype=float)
