import math
from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from logistic_rd.errors import DegenerateNu, InadmissibleParams
from logistic_rd.genetics import GenotypeFitness, containment_feasibility, map_fitness
from logistic_rd.model import Kind

frac = st.fractions(min_value=-10, max_value=10, max_denominator=50)


def triple(g11, g12, g22):
    return GenotypeFitness(Fraction(g11), Fraction(g12), Fraction(g22))


def test_examples():
    m = map_fitness(triple(1, 1, 2))
    assert (m.nu, m.theta1, m.s, m.family) == (1, 1, 1, Kind.HUXLEY)
    m = map_fitness(triple(1, Fraction(6, 5), 2))
    assert m.s == Fraction(3, 5)
    assert m.nu == Fraction(5, 4)
    assert m.theta1 == Fraction(4, 3)
    assert m.family is Kind.FHN
    with pytest.raises(DegenerateNu):
        map_fitness(triple(1, Fraction(3, 2), 2))


def test_float_example():
    m = map_fitness(GenotypeFitness(1.0, 1.2, 2.0))
    assert m.s == pytest.approx(0.6, abs=1e-15)
    assert m.nu == pytest.approx(1.25, abs=1e-15)
    assert m.theta1 == pytest.approx(4 / 3, abs=1e-15)


def test_arithmetic_progression_flag():
    m = map_fitness(triple(1, Fraction(3, 2), 2), arithmetic_progression=True)
    assert m.family is Kind.FISHER
    assert m.s == 0 and m.theta1 is None and m.nu == 2
    assert "s = 0" in m.note
    with pytest.raises(InadmissibleParams):
        map_fitness(triple(1, 1, 2), arithmetic_progression=True)


def test_undefined_nu():
    with pytest.raises(DegenerateNu):
        triple(1, 2, 2)
    with pytest.raises(DegenerateNu):
        triple(3, 3, 3)


@given(a=frac, b=frac, c=frac, shift=frac)
def test_shift_invariance_exact(a, b, c, shift):
    assume(c != b and (c - a) != 2 * (c - b))
    base = map_fitness(GenotypeFitness(a, b, c))
    moved = map_fitness(GenotypeFitness(a + shift, b + shift, c + shift))
    assert (moved.s, moved.nu, moved.theta1, moved.family) == (base.s, base.nu, base.theta1, base.family)


@given(a=frac, b=frac, c=frac, k=st.fractions(min_value=Fraction(1, 100), max_value=100))
def test_scale_covariance_exact(a, b, c, k):
    assume(c != b and (c - a) != 2 * (c - b))
    base = map_fitness(GenotypeFitness(a, b, c))
    scaled = map_fitness(GenotypeFitness(k * a, k * b, k * c))
    assert scaled.s == k * base.s
    assert (scaled.nu, scaled.theta1) == (base.nu, base.theta1)


@given(a=frac, b=frac, c=frac)
def test_nu_one_iff_theta1_one(a, b, c):
    assume(c != b and (c - a) != 2 * (c - b))
    m = map_fitness(GenotypeFitness(a, b, c))
    assert (m.nu == 1) == (m.theta1 == 1)
    assert (m.theta1 == 1) == (a == b)
    assert (m.family is Kind.HUXLEY) == (m.nu == 1)


@given(a=frac, b=frac, c=frac)
def test_threshold_identity(a, b, c):
    # 2 - nu = s / (g22 - g12), hence s theta1 = g22 - g12 exactly
    assume(c != b and (c - a) != 2 * (c - b))
    m = map_fitness(GenotypeFitness(a, b, c))
    assert m.s * m.theta1 == c - b
    assert m.s == (c - b) - (b - a)


def test_containment_examples():
    f = containment_feasibility(0.2, -0.4, 100.0)
    assert f.removable is None
    assert f.r_crit == pytest.approx(85.02, abs=0.01)
    inside = containment_feasibility(0.2, -0.4, 100.0, domain_radius=80.0)
    assert inside.removable is True
    outside = containment_feasibility(0.2, -0.4, 100.0, domain_radius=90.0)
    assert outside.removable is False
    assert "cannot be achieved by actions taken at the boundary alone" in outside.criterion
    rec = containment_feasibility(1.0, 1.0, 100.0)
    assert rec.removable is True and math.isinf(rec.r_crit)
    assert rec.to_dict()["r_crit_infinite"] is True
    assert "always removable" in rec.criterion
    other = containment_feasibility(0.6, 4 / 3, 100.0)
    assert other.removable is None
    assert "exists only if" in other.criterion
    with pytest.raises(InadmissibleParams):
        containment_feasibility(-0.1, -0.4, 100.0)
