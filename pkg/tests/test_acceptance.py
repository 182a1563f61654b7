"""Acceptance criteria 1-12: one PASS/FAIL line per criterion with its runtime."""

import random
import time
from fractions import Fraction

import numpy as np
import pytest

from conftest import case
from logistic_rd.bessel import _j_series, first_zero_j0
from logistic_rd.diffusivity import (
    DEFAULT_RTOL,
    closed_form_iterate,
    constant_profile,
    picard_iterate,
    solve_profile,
    start_value,
    tabulated_profile,
)
from logistic_rd.genetics import GenotypeFitness, map_fitness
from logistic_rd.solution import assemble, critical_radius
from logistic_rd.spatial import RadialMode, phi
from logistic_rd.verify import (
    BoundaryCondition,
    compare,
    fd_convergence,
    fd_simulate,
    pde_residual,
    relation_residual,
)

NAMES = ["fisher", "huxley", "fhn"]
LAMBDA1 = 2.404825557695773


def report(capsys, n, ok, elapsed, limit, detail):
    within = elapsed < limit
    verdict = "PASS" if ok and within else "FAIL"
    with capsys.disabled():
        print(f"\ncriterion {n}: {verdict}  {detail}  [{elapsed * 1e3:.3f} ms, limit {limit * 1e3:g} ms]")
    assert ok, detail
    assert within, f"runtime {elapsed:.4g} s exceeds {limit:g} s"


def timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def test_criterion_01_fisher_reserve(capsys):
    first_zero_j0()  # lambda1 is computed once per process (criterion 3)
    design, dt = timed(lambda: critical_radius("fisher", 100.0, 0.2))
    ok = abs(design.diameter - 107.5) <= 1.0
    report(capsys, 1, ok, dt, 1e-3, f"diameter {design.diameter:.6f} km (107.5 +- 1)")


def test_criterion_02_fhn_reserve(capsys):
    first_zero_j0()
    design, dt = timed(lambda: critical_radius("fhn", 100.0, 0.2, -0.4))
    ok = abs(design.diameter - 170.0) <= 0.5
    report(capsys, 2, ok, dt, 1e-3, f"diameter {design.diameter:.6f} km (170.0 +- 0.5)")


def test_criterion_03_lambda1(capsys):
    first_zero_j0.cache_clear()
    lam, dt = timed(first_zero_j0)
    below, _ = _j_series(np.array(lam - 1e-12))
    above, _ = _j_series(np.array(lam + 1e-12))
    ok = abs(lam - LAMBDA1) <= 1e-12 and below > 0 > above
    report(capsys, 3, ok, dt, 10e-3,
           f"lambda1 {lam!r}, series J0 at -+1e-12: {float(below):.2e}, {float(above):.2e}")


def test_criterion_04_fisher_profile(capsys):
    model, params, theta_max = case("fisher")

    def run():
        prof = solve_profile(model, params, theta_max)
        return prof, closed_form_iterate(model, params, 2, prof.theta)

    (prof, d2), dt = timed(run)
    inside = prof.theta <= 1.0
    gap = float(np.max(np.abs(d2[inside] - prof.D[inside])))
    d0, d1 = prof.D[0], prof.D_at(1.0)
    ok = (abs(d0 - 2.5) <= 1e-6 and abs(d1 - 1.5) <= 1e-6
          and bool(np.all(np.diff(prof.D) < 0)) and gap <= 0.05)
    report(capsys, 4, ok, dt, 1.0,
           f"D(0) {d0:.10f}, D(1) {d1:.10f}, decreasing on [0,2], max|D2-D| {gap:.4g} (<= 0.05)")


def test_criterion_05_huxley_profile(capsys):
    model, params, theta_max = case("huxley")

    def run():
        prof = solve_profile(model, params, theta_max)
        return prof, closed_form_iterate(model, params, 2, prof.theta)

    (prof, d2), dt = timed(run)
    gap = float(np.max(np.abs(d2 - prof.D)))
    report(capsys, 5, gap <= 1e-2, dt, 1.0, f"max|D2-D| {gap:.4g} (<= 1e-2)")


def test_criterion_06_compatibility(capsys, profiles):
    res, dt = timed(lambda: {n: relation_residual(profiles[n]).max_abs for n in NAMES})
    ok = all(res[n] <= 1e-8 * profiles[n].model.s for n in NAMES)
    detail = ", ".join(f"{n} {v:.2e}" for n, v in res.items())
    report(capsys, 6, ok, dt, 0.1, f"relation residual {detail} (<= 1e-8 s)")


def test_criterion_07_pde_residual(capsys, profiles):
    def run():
        out = {}
        for n in NAMES:
            prof = profiles[n]
            sol = assemble(prof.model, prof.params, prof)
            rep = pde_residual(sol)
            orders = [r.order_estimate for r in fd_convergence(sol)[1:]]
            out[n] = (rep.max_abs / rep.scale, min(orders))
        return out

    res, dt = timed(run)
    ok = all(rel <= 1e-10 and order >= 3.5 for rel, order in res.values())
    detail = ", ".join(f"{n} {rel:.2e}/order {o:.3f}" for n, (rel, o) in res.items())
    report(capsys, 7, ok, dt, 5.0, f"analytic residual/scale and FD order: {detail}")


@pytest.mark.slow
def test_criterion_08_simulator_oracle(capsys, solutions):
    sol = solutions["fisher"]
    r = np.linspace(0.0, sol.r1, 257)
    theta0 = np.asarray(sol.theta(r, 0.0))
    theta0[-1] = 0.0
    t_end = 1.0 / abs(sol.A)

    def run():
        traj = fd_simulate(theta0, sol.model, sol.profile, BoundaryCondition.dirichlet(), t_end,
                           radius=sol.r1)
        return traj, compare(traj, sol)

    (traj, rep), dt = timed(run)
    err = float(rep.linf[-1])
    ok = err <= 1e-4 and traj.dt <= traj.info["dt_bound"]
    report(capsys, 8, ok, dt, 30.0,
           f"Linf at t=1/|A| {err:.3e} (<= 1e-4), dt {traj.dt:.3e}, steps {traj.info['n_steps']}")


@pytest.mark.slow
def test_criterion_09_critical_radius_probe(capsys, profiles):
    prof = profiles["fisher"]
    s = prof.model.s
    r_crit = critical_radius("fisher", float(prof.D[0]), s).r_crit

    def centre(radius):
        r = np.linspace(0.0, radius, 65)
        shape = RadialMode(2, "positive", LAMBDA1 / radius)
        theta0 = 0.05 * np.maximum(np.asarray(phi(shape, r)), 0.0)
        theta0[-1] = 0.0
        traj = fd_simulate(theta0, prof.model, prof, BoundaryCondition.dirichlet(), 5.0 / s,
                           radius=radius, n_samples=2)
        return traj.theta[0, 0], traj.theta[-1, 0]

    (small, large), dt = timed(lambda: (centre(0.8 * r_crit), centre(1.25 * r_crit)))
    ok = small[1] < small[0] and large[1] > large[0]
    report(capsys, 9, ok, dt, 60.0,
           f"r_crit {r_crit:.4f}: centre 0.8 r_crit {small[0]:.4f} -> {small[1]:.4f}, "
           f"1.25 r_crit {large[0]:.4f} -> {large[1]:.4f}")


def test_criterion_10_fixed_point(capsys, profiles):
    def run():
        return {n: float(np.max(np.abs(picard_iterate(p.model, p.params, p).D - p.D)) / np.max(p.D))
                for n, p in profiles.items()}

    res, dt = timed(run)
    ok = all(v <= 10 * DEFAULT_RTOL for v in res.values())
    detail = ", ".join(f"{n} {v:.2e}" for n, v in res.items())
    report(capsys, 10, ok, dt, 0.1, f"max|T(D)-D|/max D {detail} (<= {10 * DEFAULT_RTOL:g})")


def test_criterion_11_closed_form_iterates(capsys):
    def run():
        out = {}
        for n in NAMES:
            model, params, theta_max = case(n)
            start = constant_profile(model, params, start_value(model, params), theta_max)
            th = start.theta
            d1 = closed_form_iterate(model, params, 1, th)
            e1 = float(np.max(np.abs(picard_iterate(model, params, start).D - d1)))
            d2 = closed_form_iterate(model, params, 2, th)
            first = tabulated_profile(model, params, th, d1)
            e2 = float(np.max(np.abs(picard_iterate(model, params, first).D - d2)))
            out[n] = (e1, e2)
        return out

    res, dt = timed(run)
    ok = all(e1 <= 1e-6 and e2 <= 1e-6 for e1, e2 in res.values())
    detail = ", ".join(f"{n} {e1:.1e}/{e2:.1e}" for n, (e1, e2) in res.items())
    report(capsys, 11, ok, dt, 1.0, f"level 1/level 2 max error {detail} (<= 1e-6)")


def test_criterion_12_genetics_identities(capsys):
    rng = random.Random(12)

    def frac():
        return Fraction(rng.randint(-500, 500), rng.randint(1, 60))

    triples = []
    while len(triples) < 1000:
        a, b, c = frac(), frac(), frac()
        if c != b and (c - a) != 2 * (c - b):
            shift, k = frac(), Fraction(rng.randint(1, 200), rng.randint(1, 60))
            triples.append((GenotypeFitness(a, b, c),
                            GenotypeFitness(a + shift, b + shift, c + shift),
                            GenotypeFitness(k * a, k * b, k * c), k))

    def run():
        bad = 0
        for base, shifted, stretched, k in triples:
            m = map_fitness(base)
            moved = map_fitness(shifted)
            scaled = map_fitness(stretched)
            bad += (moved.s, moved.nu, moved.theta1) != (m.s, m.nu, m.theta1)
            bad += (scaled.s != k * m.s) or (scaled.nu, scaled.theta1) != (m.nu, m.theta1)
            bad += (m.nu == 1) != (m.theta1 == 1)
        return bad

    bad, dt = timed(run)
    report(capsys, 12, bad == 0, dt, 0.1, f"1000 exact triples, {bad} identity violations")
