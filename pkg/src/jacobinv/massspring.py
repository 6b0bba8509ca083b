"""Spring-mass chains and their Jacobi matrices.

A chain of ``N`` masses ``m_0..m_{N-1}`` joined by ``N + 1`` springs with
elasticity parameters ``gamma_0..gamma_N`` (stiffness over length; an end
spring of zero stiffness is a free end) has

    a_i = (gamma_i + gamma_{i+1}) / m_i,   b_i = -gamma_{i+1} / sqrt(m_i m_{i+1}).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import (
    DEFAULT_TOL,
    InvalidSystem,
    JacobiMatrix,
    NotRealizable,
    PerturbationParams,
    TolerancePolicy,
    require_jacobi,
)


@dataclass(frozen=True)
class MassSpringSystem:
    masses: tuple
    gammas: tuple

    def __post_init__(self):
        object.__setattr__(self, "masses", tuple(float(x) for x in self.masses))
        object.__setattr__(self, "gammas", tuple(float(x) for x in self.gammas))

    def violations(self) -> list:
        out = []
        m, g = self.masses, self.gammas
        if not m:
            out.append("need at least one mass")
        if len(g) != len(m) + 1:
            out.append("need len(gammas) == len(masses) + 1")
            return out
        if not all(math.isfinite(x) for x in m + g):
            out.append("values must be finite")
        if any(x <= 0 for x in m):
            out.append("masses must be positive")
        if any(x <= 0 for x in g[1:-1]):
            out.append("interior gammas must be positive")
        if g[0] < 0 or g[-1] < 0:
            out.append("end gammas must be nonnegative")
        if not any(x > 0 for x in g):
            out.append("at least one gamma must be positive")
        return out

    def to_dict(self) -> dict:
        return {"masses": list(self.masses), "gammas": list(self.gammas)}

    @classmethod
    def from_dict(cls, d: dict) -> "MassSpringSystem":
        for key in ("masses", "gammas"):
            if key not in d:
                raise InvalidSystem(f"system JSON missing field '{key}'", [f"missing field '{key}'"])
        return cls(d["masses"], d["gammas"])


def system_to_jacobi(S: MassSpringSystem) -> JacobiMatrix:
    bad = S.violations()
    if bad:
        raise InvalidSystem("invalid mass-spring system: " + "; ".join(bad), bad)
    m, g = S.masses, S.gammas
    N = len(m)
    a = [(g[i] + g[i + 1]) / m[i] for i in range(N)]
    b = [-g[i + 1] / math.sqrt(m[i] * m[i + 1]) for i in range(N - 1)]
    return JacobiMatrix(a, b)


def jacobi_to_system(J: JacobiMatrix, gamma0: float, tol: TolerancePolicy = DEFAULT_TOL) -> MassSpringSystem:
    """Chain with ``m_0 = 1`` and the given ``gamma_0`` whose matrix is ``J``.

    Raises :class:`NotRealizable` with the offending index when some interior
    ``gamma`` comes out nonpositive or ``gamma_N`` negative.
    """
    require_jacobi(J)
    gamma0 = float(gamma0)
    if not gamma0 >= 0 or not math.isfinite(gamma0):
        raise InvalidSystem(f"gamma0={gamma0!r} must be a nonnegative number")
    N = J.size
    m = [1.0]
    g = [gamma0]
    for i in range(N):
        nxt = J.a[i] * m[i] - g[i]
        if i < N - 1:
            if nxt <= 0:
                raise NotRealizable(i + 1, f"gamma_{i + 1}={nxt!r} <= 0; no chain with gamma_0={gamma0!r}")
            g.append(nxt)
            m.append(nxt * nxt / (J.b[i] ** 2 * m[i]))
        else:
            # last spring may be absent (free end); round-off near zero is clipped
            if nxt < -tol.rel_tol * max(1.0, J.a[i] * m[i]):
                raise NotRealizable(N, f"gamma_{N}={nxt!r} < 0; no chain with gamma_0={gamma0!r}")
            g.append(max(nxt, 0.0))
    S = MassSpringSystem(m, g)
    if not any(x > 0 for x in g):
        raise NotRealizable(0, "all gammas vanish")
    return S


def perturbation_to_physical(p: PerturbationParams, m_n: float) -> tuple:
    """``(m~_n, gamma)`` of the added mass and spring at site ``p.site``."""
    m_n = float(m_n)
    if not m_n > 0:
        raise InvalidSystem(f"m_n={m_n!r} must be positive")
    return m_n / p.theta_sq, p.M * m_n
