import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import case
from logistic_rd.diffusivity import (
    DEFAULT_RTOL,
    DiffusivityProfile,
    closed_form_iterate,
    constant_profile,
    invert_kirchhoff,
    kirchhoff_u,
    laplace_branch_D,
    picard_iterate,
    solve_profile,
    start_value,
    tabulated_profile,
)
from logistic_rd.errors import (
    BlowUp,
    EvaluationAtSingularity,
    InadmissibleParams,
    NonPositiveD,
    OutOfRange,
    WrongRegime,
)
from logistic_rd.export import PROFILE_HEADER, write_csv
from logistic_rd.model import ReactionModel, SymmetryParams, reaction_eval

# 50-digit evaluations of the printed closed forms
FISHER_D1_HALF = 1.875
FISHER_D2_HALF = 1.952457147250751
HUXLEY_D2_HALF = 1.759944065065796
FHN_D2_HALF = 1.814648551667396

ANCHORS = {"fisher": (2.5, 1.5), "huxley": (1.5, 1.5), "fhn": (2.0, 1.5)}


@pytest.mark.parametrize("name", ["fisher", "huxley", "fhn"])
def test_profile_invariants(profiles, name):
    prof = profiles[name]
    d0, d1 = ANCHORS[name]
    assert prof.U[0] == 0.0
    assert np.all(np.diff(prof.U) > 0)
    assert np.all(prof.D > 0)
    assert abs(prof.D[0] - d0) <= 1e-6 * d0
    assert abs(prof.D_at(1.0) - d1) <= 1e-6 * d1
    assert prof.theta.size == 1001


@pytest.mark.parametrize("name", ["fisher", "huxley", "fhn"])
def test_compatibility_restated(profiles, name):
    prof = profiles[name]
    A, kappa = prof.params.A, prof.params.kappa
    res = prof.D * (reaction_eval(prof.model, prof.theta) - kappa * prof.U) - A * prof.U
    assert np.max(np.abs(res)) <= DEFAULT_RTOL * abs(A) * prof.U_max


def test_fisher_shape(profiles):
    prof = profiles["fisher"]
    assert prof.theta_max == 2.0
    assert np.all(np.diff(prof.D) < 0)


def test_huxley_interior_maximum(profiles):
    prof = profiles["huxley"]
    k = int(np.argmax(prof.D))
    assert 0 < k < prof.theta.size - 1
    assert prof.D[k] > prof.D[0] and prof.D[k] > prof.D[-1]


def test_fhn_anchor_at_theta1_outside_grid(profiles):
    # theta1 = -1 lies outside [0, 1]; D(1) still equals -A/K^2
    prof = profiles["fhn"]
    assert prof.D[-1] == pytest.approx(1.5, rel=1e-9)


@pytest.mark.parametrize("name", ["fisher", "huxley", "fhn"])
def test_fixed_point(profiles, name):
    prof = profiles[name]
    nxt = picard_iterate(prof.model, prof.params, prof)
    assert np.max(np.abs(nxt.D - prof.D)) <= 10 * DEFAULT_RTOL * np.max(prof.D)


@pytest.mark.parametrize("name", ["fisher", "huxley", "fhn"])
def test_launch_halving_self_consistent(profiles, name):
    model, params, theta_max = case(name)
    halved = solve_profile(model, params, theta_max, launch=0.5e-6)
    assert np.max(np.abs(halved.D - profiles[name].D)) < 1e-9


@pytest.mark.parametrize("name", ["fisher", "huxley", "fhn"])
def test_level1_from_constant(name):
    model, params, theta_max = case(name)
    start = constant_profile(model, params, start_value(model, params), theta_max)
    d1 = closed_form_iterate(model, params, 1, start.theta)
    assert np.max(np.abs(picard_iterate(model, params, start).D - d1)) <= 1e-6


@pytest.mark.parametrize("name", ["fisher", "huxley", "fhn"])
def test_level2_from_level1(name):
    model, params, theta_max = case(name)
    th = np.linspace(0.0, theta_max, 1001)
    first = tabulated_profile(model, params, th, closed_form_iterate(model, params, 1, th))
    d2 = closed_form_iterate(model, params, 2, th)
    assert np.max(np.abs(picard_iterate(model, params, first).D - d2)) <= 1e-6


def test_closed_form_values():
    fm, fp, _ = case("fisher")
    hm, hp, _ = case("huxley")
    nm, np_, _ = case("fhn")
    assert closed_form_iterate(fm, fp, 0, 0.5) == 2.5
    assert closed_form_iterate(fm, fp, 1, 0.5) == pytest.approx(FISHER_D1_HALF, abs=1e-14)
    assert closed_form_iterate(fm, fp, 2, 0.5) == pytest.approx(FISHER_D2_HALF, abs=1e-13)
    assert closed_form_iterate(hm, hp, 2, 0.5) == pytest.approx(HUXLEY_D2_HALF, abs=1e-13)
    assert closed_form_iterate(nm, np_, 1, 1.0) == pytest.approx(1.5, abs=1e-14)
    assert closed_form_iterate(nm, np_, 2, 0.5) == pytest.approx(FHN_D2_HALF, abs=1e-13)


@pytest.mark.parametrize("name", ["fisher", "huxley", "fhn"])
def test_closed_forms_exact_at_anchors(name):
    model, params, _ = case(name)
    d0, d1 = ANCHORS[name]
    for level in (1, 2):
        vals = closed_form_iterate(model, params, level, np.array([0.0, 1.0]))
        if name == "fhn":
            # FHN iterates start from D(1) and keep it exactly
            assert vals[1] == pytest.approx(d1, abs=1e-13)
        else:
            assert vals[0] == pytest.approx(d0, abs=1e-13)
            assert vals[1] == pytest.approx(d1, abs=1e-13)


def test_closed_form_regimes():
    fhn = ReactionModel.fhn(1.0, -0.5)
    with pytest.raises(WrongRegime):
        closed_form_iterate(fhn, SymmetryParams.oscillatory(-0.1, 1.0), 2, 0.5)
    with pytest.raises(WrongRegime):
        closed_form_iterate(ReactionModel.huxley(1.0), SymmetryParams.oscillatory(-0.1, 1.0), 2, 0.5)
    with pytest.raises(ValueError):
        closed_form_iterate(fhn, SymmetryParams.oscillatory(-1.5, 1.0), 3, 0.5)


def test_picard_blowup():
    model, params, _ = case("fisher")
    # with D = 0.5 the denominator theta (0.5 - theta) vanishes at 0.5
    with pytest.raises(BlowUp):
        picard_iterate(model, params, constant_profile(model, params, 0.5))


def test_constant_profile_is_not_fixed_point():
    model, params, _ = case("fisher")
    start = constant_profile(model, params, 2.5)
    assert np.max(np.abs(start.relation_residual())) > 0.1


def test_solve_rejects_inadmissible():
    with pytest.raises(InadmissibleParams):
        solve_profile(ReactionModel.fisher(1.0), SymmetryParams.oscillatory(0.5, 1.0))
    with pytest.raises(InadmissibleParams):
        solve_profile(ReactionModel.fisher(1.0), SymmetryParams.laplace(-1.0))


def test_profile_validation():
    model, params, _ = case("fisher")
    th = np.linspace(0, 1, 11)
    with pytest.raises(NonPositiveD):
        DiffusivityProfile(th, th, np.where(th > 0.5, -1.0, 1.0), model, params)
    with pytest.raises(ValueError):
        DiffusivityProfile(th + 0.1, th, np.ones_like(th), model, params)


@settings(max_examples=200, deadline=None)
@given(x=st.floats(0.0, 1.0))
def test_kirchhoff_roundtrip(profiles, x):
    for prof in profiles.values():
        th = x * prof.theta_max
        assert abs(invert_kirchhoff(prof, kirchhoff_u(prof, th)) - th) <= 1e-10


def test_kirchhoff_examples(profiles):
    prof = profiles["fisher"]
    assert kirchhoff_u(prof, 0.0) == 0.0
    assert invert_kirchhoff(prof, 0.0) == 0.0
    assert invert_kirchhoff(prof, kirchhoff_u(prof, 0.7)) == pytest.approx(0.7, abs=1e-10)
    assert invert_kirchhoff(prof, prof.U_max) == pytest.approx(prof.theta_max, abs=1e-12)
    with pytest.raises(OutOfRange):
        invert_kirchhoff(prof, prof.U_max * 1.01)
    with pytest.raises(OutOfRange):
        kirchhoff_u(prof, -0.1)


def test_kirchhoff_matches_quadrature(profiles):
    # U against an independent trapezoid integral of the interpolated D
    prof = profiles["huxley"]
    fine = np.linspace(0.0, 0.8, 20001)
    trap = np.trapezoid(prof.D_at(fine), fine)
    assert kirchhoff_u(prof, 0.8) == pytest.approx(trap, abs=1e-8)


def test_laplace_branch():
    D, report = laplace_branch_D(ReactionModel.fisher(1.0), -1.0, 0.5)
    assert D == pytest.approx(4.0, abs=1e-14)
    # here D = 1/(theta (1 - theta)): divergent at both ends, including theta -> 1-
    assert 1.0 in report.divergent_at
    assert "theta -> 1" in report.describe()
    _, fhn = laplace_branch_D(ReactionModel.fhn(1.0, -0.5), 0.0, 0.5)
    assert fhn.divergent_at == (-0.5, 0.0, 1.0)
    # D ~ theta^(a-2) (1-theta)^(-1-a) exp(-a/theta): A = -s is bounded at 1, divergent at 0
    _, hux = laplace_branch_D(ReactionModel.huxley(1.0), -1.0, 0.5)
    assert hux.divergent_at == (0.0,)
    with pytest.raises(OutOfRange):
        laplace_branch_D(ReactionModel.fisher(1.0), -1.0, 1.0)
    with pytest.raises(EvaluationAtSingularity):
        laplace_branch_D(ReactionModel.fhn(1.0, 0.4), -1.0, 0.4)


@given(A=st.floats(-5.0, 5.0), t1=st.floats(-3.0, -0.05), s=st.floats(0.1, 5.0))
def test_laplace_branch_always_divergent(A, t1, s):
    for model in (ReactionModel.fisher(s), ReactionModel.huxley(s), ReactionModel.fhn(s, t1)):
        _, report = laplace_branch_D(model, A, 0.5)
        assert report.divergent_at


@pytest.mark.parametrize("model", [ReactionModel.huxley(1.3), ReactionModel.fisher(0.8)])
@pytest.mark.parametrize("A", [-2.0, -0.4, 0.6])
def test_laplace_branch_divergence_matches_values(model, A):
    # D evaluated close to each zero grows exactly where the report says
    D, report = laplace_branch_D(model, A, np.array([1e-6, 0.5, 1 - 1e-6]))
    D = np.abs(D)
    assert (D[0] > 10 * D[1]) == (0.0 in report.divergent_at)
    assert (D[2] > 10 * D[1]) == (1.0 in report.divergent_at)


def test_laplace_branch_fhn_solves_ode():
    # kappa = 0: U = D R / A must satisfy dU/dtheta = D
    model, A = ReactionModel.fhn(1.0, -0.5), -0.7
    th = np.linspace(0.2, 0.8, 7)
    h = 1e-6
    D, _ = laplace_branch_D(model, A, th)
    Up = laplace_branch_D(model, A, th + h)[0] * reaction_eval(model, th + h) / A
    Um = laplace_branch_D(model, A, th - h)[0] * reaction_eval(model, th - h) / A
    np.testing.assert_allclose((Up - Um) / (2 * h), D, rtol=1e-6)


def test_profile_csv_export(profiles):
    buf = io.StringIO()
    write_csv(buf, PROFILE_HEADER, np.array(list(profiles["fisher"].rows())))
    lines = buf.getvalue().splitlines()
    assert lines[0] == "theta,U,D"
    assert len(lines) == 1002
    back = np.array([float(v) for v in lines[500].split(",")])
    row = np.array(list(profiles["fisher"].rows())[499])
    np.testing.assert_array_equal(back, row)
