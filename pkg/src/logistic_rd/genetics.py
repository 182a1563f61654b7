"""Diploid fitness coefficients -> logistic reaction parameters.

With genotype fitnesses g11, g12, g22 (zero, one, two copies of the new
allele a2) the allele-frequency source is s*theta*(1-theta)*(theta-theta1):

    s = g11 - 2 g12 + g22,   nu = (g22 - g11)/(g22 - g12),   theta1 = 1/(2 - nu)

The arithmetic works for ``fractions.Fraction`` inputs as well as floats,
which makes the algebraic identities exactly checkable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateNu, InadmissibleParams
from .model import Kind
from .solution import critical_radius
from .spatial import first_bessel_zero


@dataclass(frozen=True)
class GenotypeFitness:
    g11: float
    g12: float
    g22: float

    def __post_init__(self):
        if self.g22 == self.g12:
            raise DegenerateNu("g22 == g12 leaves nu undefined")

    @classmethod
    def parse(cls, text: str) -> "GenotypeFitness":
        parts = [float(x) for x in text.replace(";", ",").split(",")]
        if len(parts) != 3:
            raise ValueError("expected three comma-separated fitness values")
        return cls(*parts)


@dataclass(frozen=True)
class FitnessMapping:
    s: float
    theta1: float | None
    nu: float
    family: Kind
    note: str = ""


def map_fitness(f: GenotypeFitness, arithmetic_progression: bool = False) -> FitnessMapping:
    """Reaction parameters for a fitness triple.

    The family is FHN in general and Huxley when theta1 == 1 (g11 == g12,
    a totally recessive a2). Fitnesses in arithmetic progression give
    nu == 2 and s == 0; that case raises :class:`DegenerateNu` unless the
    caller asserts it with ``arithmetic_progression=True``, in which case a
    Fisher-family mapping with ``theta1=None`` and the raw ``s`` is returned.
    """
    # with d = g22 - g12 and e = g12 - g11: s = d - e, nu = (d + e)/d and
    # 1/(2 - nu) = d/s, so nu == 2 iff s == 0 and theta1 == 1 iff e == 0
    d = f.g22 - f.g12
    e = f.g12 - f.g11
    s = d - e
    nu = (d + e) / d
    if s == 0:
        if arithmetic_progression:
            return FitnessMapping(
                s, None, nu, Kind.FISHER,
                "arithmetic progression: nu = 2 so theta1 is undefined and s = 0",
            )
        raise DegenerateNu("nu = 2 (fitnesses in arithmetic progression): theta1 = 1/(2 - nu) diverges")
    if arithmetic_progression:
        raise InadmissibleParams("fitnesses are not in arithmetic progression (nu != 2)")
    theta1 = d / s
    if e == 0:
        return FitnessMapping(s, theta1, nu, Kind.HUXLEY, "totally recessive: theta1 = 1")
    return FitnessMapping(s, theta1, nu, Kind.FHN)


@dataclass(frozen=True)
class Feasibility:
    removable: bool | None
    r_crit: float
    criterion: str
    domain_radius: float | None = None

    def to_dict(self) -> dict:
        return {
            "removable": self.removable,
            "r_crit": self.r_crit,
            "r_crit_infinite": math.isinf(self.r_crit),
            "criterion": self.criterion,
            "domain_radius": self.domain_radius,
        }


def containment_feasibility(
    s: float, theta1: float, D0: float, domain_radius: float | None = None
) -> Feasibility:
    """Whether boundary culling alone can drive the new allele to extinction.

    ``removable`` is True/False when ``domain_radius`` is given and the
    criterion is decisive, and None when it is not (no radius supplied, or
    theta1 in neither of the analysed regimes).
    """
    if not (s > 0 and D0 > 0):
        raise InadmissibleParams("s and D0 must be positive")
    if theta1 == 1:
        return Feasibility(
            True, math.inf,
            "totally recessive: the extinguishing solution exists for every domain size; "
            "always removable by culling at the boundary",
            domain_radius,
        )
    lam = first_bessel_zero()
    if theta1 < 0:
        r_c = critical_radius(Kind.FHN, D0, s, theta1).r_crit
        if domain_radius is None:
            return Feasibility(None, r_c, f"removable iff domain radius < r_c = {r_c:.6g}")
        if domain_radius < r_c:
            return Feasibility(True, r_c, f"domain radius < r_c = {r_c:.6g}: removable by boundary culling", domain_radius)
        return Feasibility(
            False, r_c,
            f"domain radius >= r_c = {r_c:.6g}: cannot be achieved by actions taken at the boundary alone",
            domain_radius,
        )
    r_c = lam * math.sqrt(D0 / (s * abs(theta1)))
    return Feasibility(
        None, r_c,
        f"extinguishing solution exists only if the domain radius is less than "
        f"r_c = lambda1 sqrt(D0/(s|theta1|)) = {r_c:.6g}",
        domain_radius,
    )
