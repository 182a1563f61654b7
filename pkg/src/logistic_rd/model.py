"""Reaction terms, symmetry parameters and the admissibility table.

Densities ``theta`` are dimensionless (scaled by carrying capacity), the
rate ``s`` is in 1/time, diffusivities are in length^2/time and the
Helmholtz parameter ``kappa`` in 1/length^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import InadmissibleParams


class Kind(str, Enum):
    FISHER = "fisher"
    HUXLEY = "huxley"
    FHN = "fhn"

    @classmethod
    def parse(cls, name: str) -> "Kind":
        aliases = {
            "fisher": cls.FISHER,
            "huxley": cls.HUXLEY,
            "fhn": cls.FHN,
            "fitzhughnagumo": cls.FHN,
            "fitzhugh-nagumo": cls.FHN,
        }
        try:
            return aliases[name.strip().lower()]
        except KeyError:
            raise ValueError(f"unknown model kind {name!r}") from None


@dataclass(frozen=True)
class ReactionModel:
    """Logistic reaction term R(theta).

    ``fisher``:  s*theta*(1 - theta)
    ``huxley``:  s*theta**2*(1 - theta)
    ``fhn``:     s*theta*(1 - theta)*(theta - theta1)
    """

    kind: Kind
    s: float
    theta1: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        if not self.s > 0:
            raise InadmissibleParams(f"growth rate s must be positive, got {self.s}")
        if self.kind is Kind.FHN:
            if self.theta1 is None or not math.isfinite(self.theta1):
                raise InadmissibleParams("fhn model needs a finite threshold theta1")
        elif self.theta1 is not None:
            raise InadmissibleParams(f"theta1 only applies to the fhn model, not {self.kind.value}")

    @classmethod
    def fisher(cls, s: float) -> "ReactionModel":
        return cls(Kind.FISHER, s)

    @classmethod
    def huxley(cls, s: float) -> "ReactionModel":
        return cls(Kind.HUXLEY, s)

    @classmethod
    def fhn(cls, s: float, theta1: float) -> "ReactionModel":
        return cls(Kind.FHN, s, theta1)

    @property
    def roots(self) -> tuple[float, ...]:
        if self.kind is Kind.FHN:
            return tuple(sorted({0.0, 1.0, float(self.theta1)}))
        return (0.0, 1.0)

    def __call__(self, theta):
        return reaction_eval(self, theta)

    def derivative(self, theta):
        """dR/dtheta."""
        th = np.asarray(theta, dtype=float)
        s = self.s
        if self.kind is Kind.FISHER:
            out = s * (1.0 - 2.0 * th)
        elif self.kind is Kind.HUXLEY:
            out = s * (2.0 * th - 3.0 * th * th)
        else:
            t1 = self.theta1
            # d/dθ [θ(1-θ)(θ-θ1)] = -3θ² + 2(1+θ1)θ - θ1
            out = s * (-3.0 * th * th + 2.0 * (1.0 + t1) * th - t1)
        return out if out.ndim else float(out)


def reaction_eval(model: ReactionModel, theta):
    """Evaluate R(theta) for scalars or arrays."""
    th = np.asarray(theta, dtype=float)
    s = model.s
    if model.kind is Kind.FISHER:
        out = s * th * (1.0 - th)
    elif model.kind is Kind.HUXLEY:
        out = s * th * th * (1.0 - th)
    else:
        out = s * th * (1.0 - th) * (th - model.theta1)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class SymmetryParams:
    """Temporal rate ``A``, Helmholtz parameter ``kappa`` and wavenumber ``K``.

    ``kappa`` is one of ``+K**2``, ``-K**2`` or ``0``; use the ``from_*``
    constructors rather than filling in both by hand.
    """

    A: float
    kappa: float
    K: float

    def __post_init__(self):
        if self.K < 0:
            raise InadmissibleParams("wavenumber K must be non-negative")
        if self.kappa == 0.0:
            if self.K != 0.0:
                raise InadmissibleParams("kappa = 0 requires K = 0")
        elif not math.isclose(abs(self.kappa), self.K * self.K, rel_tol=1e-14):
            raise InadmissibleParams(f"|kappa| = {abs(self.kappa)} is not K**2 = {self.K**2}")

    @classmethod
    def oscillatory(cls, A: float, K: float) -> "SymmetryParams":
        return cls(A, K * K, K)

    @classmethod
    def evanescent(cls, A: float, K: float) -> "SymmetryParams":
        return cls(A, -K * K, K)

    @classmethod
    def laplace(cls, A: float) -> "SymmetryParams":
        return cls(A, 0.0, 0.0)

    @property
    def kappa_sign(self) -> int:
        return (self.kappa > 0) - (self.kappa < 0)


@dataclass(frozen=True)
class Anchors:
    """Values the compatible diffusivity must take at the roots of R."""

    D0: float
    D1: float
    Dtheta1: float | None = None
    singular: bool = False

    def as_dict(self) -> dict:
        out = {"D(0)": self.D0, "D(1)": self.D1}
        if self.Dtheta1 is not None:
            out["D(theta1)"] = self.Dtheta1
        return out


def consistency_constants(
    model: ReactionModel,
    K: float,
    D0: float | None = None,
    *,
    singular: bool = False,
    A: float | None = None,
    require_decay: bool = True,
) -> tuple[SymmetryParams, Anchors]:
    """Rate ``A`` and anchored diffusivities for a kappa = K**2 > 0 reduction.

    Fisher:  A = s - K**2 D(0),          D(1) = -A/K**2
    Huxley:  A = -K**2 D(0),             D(1) = D(0)
    FHN:     A = -(s theta1 + K**2 D(0)), D(1) = D(theta1) = -A/K**2

    For the FHN singular branch (``singular=True``) D(0) is forced to
    ``-s*theta1/K**2`` and ``A`` must be supplied since it is no longer
    tied to D(0).
    """
    if not K > 0:
        raise InadmissibleParams(f"K must be positive, got {K}")
    k2 = K * K
    theta1 = None
    if singular:
        if model.kind is not Kind.FHN:
            raise InadmissibleParams("the singular branch exists only for the fhn model")
        if A is None:
            raise InadmissibleParams("singular fhn branch needs A supplied explicitly")
        d0_forced = -model.s * model.theta1 / k2
        if D0 is not None and not math.isclose(D0, d0_forced, rel_tol=1e-12):
            raise InadmissibleParams(f"singular branch forces D(0) = {d0_forced}, got {D0}")
        D0 = d0_forced
        rate = A
        D1 = theta1 = -rate / k2
    else:
        if D0 is None:
            raise InadmissibleParams("D0 is required outside the singular branch")
        if model.kind is Kind.FISHER:
            rate = model.s - k2 * D0
            D1 = -rate / k2
        elif model.kind is Kind.HUXLEY:
            rate = -k2 * D0
            D1 = D0
        else:
            rate = -(model.s * model.theta1 + k2 * D0)
            D1 = theta1 = -rate / k2
    if not D0 > 0:
        raise InadmissibleParams(f"D(0) must be positive, got {D0}")
    if require_decay and rate >= 0:
        raise InadmissibleParams(
            f"A = {rate:.6g} >= 0: no decaying (admissible) solution for these parameters"
        )
    if not D1 > 0:
        raise InadmissibleParams(f"anchored D(1) = {D1:.6g} is not positive")
    return SymmetryParams.oscillatory(rate, K), Anchors(D0, D1, theta1, singular)


def d0_from_rate(model: ReactionModel, K: float, A: float) -> float:
    """Invert the non-singular consistency relation for D(0)."""
    k2 = K * K
    if model.kind is Kind.FISHER:
        return (model.s - A) / k2
    if model.kind is Kind.HUXLEY:
        return -A / k2
    return -(A + model.s * model.theta1) / k2


@dataclass(frozen=True)
class Admissibility:
    admissible: bool
    reason: str
    rate_sign: int | None = field(default=None)


_ADMISSIBILITY = {
    (Kind.FISHER, 0): Admissibility(False, "kappa=0: D -> infinity as theta -> 1-"),
    (Kind.FISHER, -1): Admissibility(
        False, "kappa<0: A=K^2 D(1)>0 forces unbounded growth or a divergent diffusivity", 1
    ),
    (Kind.FISHER, 1): Admissibility(True, "kappa>0: D(1)=-A/K^2 forces A<0 (decaying)", -1),
    (Kind.HUXLEY, 0): Admissibility(
        False, "kappa=0: D diverges as theta -> 0 for A<=0 and as theta -> 1- for A>-s"
    ),
    (Kind.HUXLEY, -1): Admissibility(False, "kappa<0: A=K^2 D(1)>0 (growing population)", 1),
    (Kind.HUXLEY, 1): Admissibility(True, "kappa>0: A=-K^2 D(1) forces A<0 (decaying)", -1),
    (Kind.FHN, 0): Admissibility(
        False, "kappa=0: D diverges at a zero of R for every sign of A"
    ),
    (Kind.FHN, -1): Admissibility(
        False, "kappa<0: R(1)=0 or R(theta1)=0 forces A>0 for positive D", 1
    ),
    (Kind.FHN, 1): Admissibility(True, "kappa>0: D(1)=D(theta1)=-A/K^2 forces A<0 (decaying)", -1),
}


def classify_admissibility(model: ReactionModel | Kind | str, kappa_sign: int) -> Admissibility:
    """Which sign of kappa gives a valid population model for this family."""
    if isinstance(model, ReactionModel):
        kind = model.kind
    elif isinstance(model, Kind):
        kind = model
    else:
        kind = Kind.parse(model)
    sign = (kappa_sign > 0) - (kappa_sign < 0)
    return _ADMISSIBILITY[(kind, sign)]
