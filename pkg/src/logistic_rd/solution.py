"""Exact separable solutions u(r, t) = exp(A t) Phi(r) and reserve sizing."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .diffusivity import DiffusivityProfile
from .errors import AboveRange, InadmissibleParams, NoProtectiveRadius, NormalizationOutOfRange, OutOfRange
from .model import Kind, ReactionModel, SymmetryParams
from .spatial import RadialMode, first_bessel_zero, phi

TABLE_HEADER = ("t", "r", "u", "theta")
DEFAULT_RADII = 257


@dataclass(frozen=True, eq=False)
class ExactSolution:
    """Kirchhoff field ``u = exp(A t) c Phi(K r)`` and its density ``theta = U^-1(u)``.

    The mode amplitude is ``c = U(theta_center0)`` so that theta(0, 0) equals
    ``theta_center0``.
    """

    model: ReactionModel
    profile: DiffusivityProfile
    mode: RadialMode
    A: float
    theta_center0: float

    @property
    def r1(self) -> float:
        return self.mode.domain_radius

    @property
    def params(self) -> SymmetryParams:
        return self.profile.params

    def u(self, r, t):
        r = np.asarray(r, dtype=float)
        t = np.asarray(t, dtype=float)
        out = np.exp(self.A * t) * np.asarray(phi(self.mode, r))
        return out if np.ndim(out) else float(out)

    def earliest_time(self) -> float:
        """Earliest t at which u(0, t) stays within the tabulated U range."""
        return math.log(self.profile.U_max / self.mode.amplitude) / self.A

    def theta(self, r, t):
        return theta_at(self, r, t)


def assemble(
    model: ReactionModel,
    params: SymmetryParams,
    profile: DiffusivityProfile,
    mode_dim: int = 2,
    theta_center0: float = 1.0,
) -> ExactSolution:
    """Build the decaying exact solution for a compatible profile."""
    if not params.kappa > 0:
        raise InadmissibleParams("only kappa = K^2 > 0 gives an admissible population solution")
    if not params.A < 0:
        raise InadmissibleParams(f"A = {params.A} >= 0: no decaying solution")
    if not 0 < theta_center0 <= profile.theta_max:
        raise NormalizationOutOfRange(
            f"theta_center0 = {theta_center0} outside (0, {profile.theta_max}]"
        )
    c = profile.U_at(theta_center0)
    mode = RadialMode.from_params(params, mode_dim, amplitude=c)
    return ExactSolution(model, profile, mode, params.A, theta_center0)


def theta_at(sol: ExactSolution, r, t):
    """Density at (r, t) by Kirchhoff inversion; exactly zero at r = r1."""
    r = np.asarray(r, dtype=float)
    t = np.asarray(t, dtype=float)
    r1 = sol.r1
    if np.any(r < 0) or np.any(r > r1 * (1 + 1e-14)):
        raise OutOfRange(f"radius outside [0, {r1}]")
    u = np.asarray(sol.u(r, t))
    # Phi(r1) is zero only to rounding
    u = np.where(r >= r1, 0.0, np.maximum(u, 0.0))
    if np.any(u > sol.profile.U_max):
        t_min = sol.earliest_time()
        raise AboveRange(
            f"u exceeds U(theta_max) = {sol.profile.U_max:.6g}; earliest valid t is {t_min:.10g}",
            earliest_t=t_min,
        )
    out = sol.profile.invert(u)
    return out if np.ndim(out) else float(out)


def profile_table(sol: ExactSolution, times, n_radii: int = DEFAULT_RADII) -> np.ndarray:
    """Rows ``(t, r, u, theta)``, time-major, on a uniform radial grid [0, r1]."""
    times = np.atleast_1d(np.asarray(times, dtype=float))
    r = np.linspace(0.0, sol.r1, n_radii)
    blocks = []
    for t in times:
        u = np.asarray(sol.u(r, t))
        u[-1] = 0.0
        th = theta_at(sol, r, t)
        blocks.append(np.column_stack([np.full_like(r, t), r, u, th]))
    return np.vstack(blocks)


@dataclass(frozen=True)
class ReserveDesign:
    kind: Kind
    D0: float
    s: float
    theta1: float | None
    lambda1: float
    r_crit: float | None
    note: str = ""

    @property
    def diameter(self) -> float | None:
        return None if self.r_crit is None else 2.0 * self.r_crit

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "D0": self.D0,
            "s": self.s,
            "theta1": self.theta1,
            "lambda1": self.lambda1,
            "r_crit": self.r_crit,
            "diameter": self.diameter,
            "note": self.note,
        }


def critical_radius(kind, D0: float, s: float, theta1: float | None = None) -> ReserveDesign:
    """Smallest reserve radius beyond which the extinguishing solution cannot exist.

    Fisher: lambda1 sqrt(D0/s).  FHN (theta1 < 0): lambda1 sqrt(D0/(s |theta1|)).
    Huxley: no finite radius, returned as ``r_crit=None``.
    """
    kind = Kind(kind) if not isinstance(kind, str) else Kind.parse(kind)
    if not (D0 > 0 and s > 0):
        raise InadmissibleParams("D0 and s must be positive")
    lam = first_bessel_zero()
    if kind is Kind.FISHER:
        return ReserveDesign(kind, D0, s, None, lam, lam * math.sqrt(D0 / s), "r1 > lambda1 sqrt(D0/s)")
    if kind is Kind.HUXLEY:
        return ReserveDesign(
            kind, D0, s, None, lam, None,
            "no finite critical radius: A = -K^2 D(0) < 0 for every K, "
            "so the extinguishing solution always exists",
        )
    if theta1 is None:
        raise InadmissibleParams("fhn reserve sizing needs theta1")
    if not theta1 < 0:
        raise NoProtectiveRadius(
            f"theta1 = {theta1} >= 0: K^2 = -s theta1 / D(0) has no positive solution"
        )
    r = lam * math.sqrt(D0 / (s * abs(theta1)))
    return ReserveDesign(kind, D0, s, theta1, lam, r, "r1 > lambda1 sqrt(D0/(s |theta1|))")
