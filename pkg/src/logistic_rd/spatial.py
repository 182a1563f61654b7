"""Radial Helmholtz modes: solutions of Phi'' + (N-1)/r Phi' + kappa Phi = 0.

Only the kappa = K^2 > 0 modes (cos, J0, sin(x)/x) are bounded, positive
on the inner disc and vanish at a finite radius; the kappa < 0 and kappa = 0
families are provided for diagnostics and flagged as inadmissible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bessel import first_zero_j0, i0_i1, j0_j1, k0_k1
from .errors import InadmissibleParams, NonPositiveP
from .model import SymmetryParams
from .roots import bisect

KAPPA_CLASSES = ("positive", "negative", "zero")


def first_bessel_zero() -> float:
    """lambda_1, the first positive zero of J0 (cached)."""
    return first_zero_j0()


@dataclass(frozen=True)
class RadialMode:
    """A radial Helmholtz mode ``c*Phi_1(K r) + b*Phi_2(K r)``.

    ``b`` weights the second (singular or growing) solution and is only
    meaningful for the diagnostic kappa <= 0 classes; for kappa = 0 the pair
    is ``(1, ln r)`` in 2-D, ``(1, 1/r)`` in 3-D and ``(1, r)`` in 1-D.
    """

    dim: int
    kappa_class: str
    K: float
    amplitude: float = 1.0
    b: float = 0.0

    def __post_init__(self):
        if self.dim not in (1, 2, 3):
            raise ValueError("dimension must be 1, 2 or 3")
        if self.kappa_class not in KAPPA_CLASSES:
            raise ValueError(f"kappa_class must be one of {KAPPA_CLASSES}")
        if self.kappa_class == "zero":
            object.__setattr__(self, "K", 0.0)
        elif not self.K > 0:
            raise ValueError("K must be positive for kappa != 0")
        if self.kappa_class == "positive" and self.b != 0.0:
            raise ValueError("the bounded kappa > 0 mode has no second component")

    @classmethod
    def from_params(cls, params: SymmetryParams, dim: int = 2, amplitude: float = 1.0, b: float = 0.0):
        cls_name = {1: "positive", -1: "negative", 0: "zero"}[params.kappa_sign]
        return cls(dim, cls_name, params.K, amplitude, b)

    @property
    def kappa(self) -> float:
        return {"positive": 1.0, "negative": -1.0, "zero": 0.0}[self.kappa_class] * self.K**2

    @property
    def admissible(self) -> bool:
        return self.kappa_class == "positive"

    @property
    def note(self) -> str:
        if self.admissible:
            return "bounded, positive on [0, r1), zero at r1"
        if self.kappa_class == "negative":
            return "inadmissible: modified Bessel mode, unbounded or singular at the origin"
        return "inadmissible: Laplace mode, constant or singular at the origin"

    @property
    def domain_radius(self) -> float | None:
        """First zero r1 of the kappa > 0 mode; None otherwise."""
        if not self.admissible:
            return None
        zero = {1: 0.5 * math.pi, 2: first_bessel_zero(), 3: math.pi}[self.dim]
        return zero / self.K

    def with_amplitude(self, amplitude: float) -> "RadialMode":
        return RadialMode(self.dim, self.kappa_class, self.K, amplitude, self.b)


def _sinc_series(x):
    # sin(x)/x and its first two derivatives, for |x| < 0.5
    f = np.zeros_like(x)
    f1 = np.zeros_like(x)
    f2 = np.zeros_like(x)
    for k in range(13):
        c = (-1) ** k / math.factorial(2 * k + 1)
        f += c * x ** (2 * k)
        if k >= 1:
            f1 += c * 2 * k * x ** (2 * k - 1)
            f2 += c * 2 * k * (2 * k - 1) * x ** (2 * k - 2)
    return f, f1, f2


def _shape(mode: RadialMode, r):
    """Unit-amplitude pieces: (Phi, dPhi/dr, d2Phi/dr2) for the c and b parts."""
    r = np.asarray(r, dtype=float)
    K = mode.K
    x = K * r
    zeros = np.zeros_like(r)
    if mode.kappa_class == "positive":
        if mode.dim == 1:
            return (np.cos(x), -K * np.sin(x), -K * K * np.cos(x)), (zeros, zeros, zeros)
        if mode.dim == 2:
            j0, j1 = j0_j1(x)
            with np.errstate(divide="ignore", invalid="ignore"):
                j1_over_x = np.where(x == 0, 0.5, j1 / np.where(x == 0, 1.0, x))
            return (j0, -K * j1, K * K * (-j0 + j1_over_x)), (zeros, zeros, zeros)
        small = np.abs(x) < 0.5
        xs = np.where(small, x, 0.0)
        f_s, f1_s, f2_s = _sinc_series(xs)
        xb = np.where(small, 1.0, x)
        sn, cs = np.sin(xb), np.cos(xb)
        f_b = sn / xb
        f1_b = (xb * cs - sn) / xb**2
        f2_b = ((2 - xb * xb) * sn - 2 * xb * cs) / xb**3
        f = np.where(small, f_s, f_b)
        f1 = np.where(small, f1_s, f1_b)
        f2 = np.where(small, f2_s, f2_b)
        return (f, K * f1, K * K * f2), (zeros, zeros, zeros)

    if mode.kappa_class == "negative":
        if mode.dim == 1:
            return (
                (np.cosh(x), K * np.sinh(x), K * K * np.cosh(x)),
                (np.sinh(x), K * np.cosh(x), K * K * np.sinh(x)),
            )
        if mode.dim == 2:
            i0, i1 = i0_i1(x)
            with np.errstate(divide="ignore", invalid="ignore"):
                i1_over_x = np.where(x == 0, 0.5, i1 / np.where(x == 0, 1.0, x))
            first = (i0, K * i1, K * K * (i0 - i1_over_x))
            if mode.b == 0.0:
                return first, (zeros, zeros, zeros)
            k0, k1 = k0_k1(x)
            return first, (k0, -K * k1, K * K * (k0 + k1 / x))
        with np.errstate(divide="ignore", invalid="ignore"):
            sh, ch = np.sinh(x), np.cosh(x)
            xx = np.where(x == 0, 1.0, x)
            f = np.where(x == 0, 1.0, sh / xx)
            f1 = np.where(x == 0, 0.0, (xx * ch - sh) / xx**2)
            f2 = np.where(x == 0, 1.0 / 3.0, ((xx * xx + 2) * sh - 2 * xx * ch) / xx**3)
            e = np.exp(-x)
            g = e / x
            g1 = -e * (x + 1) / x**2
            g2 = e * (x * x + 2 * x + 2) / x**3
        return (f, K * f1, K * K * f2), (g, K * g1, K * K * g2)

    ones = np.ones_like(r)
    with np.errstate(divide="ignore", invalid="ignore"):
        if mode.dim == 1:
            second = (r, ones, zeros)
        elif mode.dim == 2:
            second = (np.log(r), 1.0 / r, -1.0 / r**2)
        else:
            second = (1.0 / r, -1.0 / r**2, 2.0 / r**3)
    return (ones, zeros, zeros), second


def _combine(mode, r, which):
    first, second = _shape(mode, r)
    out = mode.amplitude * first[which]
    if mode.b != 0.0:
        out = out + mode.b * second[which]
    return out if np.ndim(out) else float(out)


def phi(mode: RadialMode, r):
    return _combine(mode, r, 0)


def phi_prime(mode: RadialMode, r):
    return _combine(mode, r, 1)


def phi_second(mode: RadialMode, r):
    return _combine(mode, r, 2)


def radial_laplacian(mode: RadialMode, r):
    """Phi'' + (N-1)/r Phi', using N Phi''(0) at the origin."""
    r = np.asarray(r, dtype=float)
    d1 = np.asarray(phi_prime(mode, r))
    d2 = np.asarray(phi_second(mode, r))
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(r == 0, mode.dim * d2, d2 + (mode.dim - 1) * d1 / np.where(r == 0, 1.0, r))
    return out if out.ndim else float(out)


def robin_radius(mode: RadialMode, p: float, tol: float = 1e-12) -> float:
    """Radius r2 in (0, r1) where -Phi'(r2)/Phi(r2) = p.

    -Phi'/Phi grows monotonically from 0 at the origin to +inf at r1, so the
    root is unique; it is found by bisection on -Phi' - p Phi.
    """
    if not mode.admissible:
        raise InadmissibleParams("Robin relocation needs a kappa > 0 mode")
    if not p > 0:
        raise NonPositiveP(f"radiation coefficient must be positive, got {p}")
    unit = mode.with_amplitude(1.0)
    r1 = unit.domain_radius
    return bisect(lambda r: -phi_prime(unit, r) - p * phi(unit, r), 0.0, r1, xtol=tol)


def robin_coefficient(mode: RadialMode, r: float) -> float:
    """p = -Phi'(r)/Phi(r), the Robin coefficient that makes ``r`` a valid boundary."""
    return -phi_prime(mode, r) / phi(mode, r)
