"""Compiled inner loop of the radial method-of-lines simulator."""

from __future__ import annotations

import numpy as np
from numba import njit

FISHER, HUXLEY, FHN = 0, 1, 2
DIRICHLET, ROBIN, RADIATION = 0, 1, 2

OK, NEGATIVE, ABOVE = 0, 1, 2


@njit(cache=True, nogil=True)
def _reaction(kind, s, theta1, th):
    if kind == FISHER:
        return s * th * (1.0 - th)
    if kind == HUXLEY:
        return s * th * th * (1.0 - th)
    return s * th * (1.0 - th) * (th - theta1)


@njit(cache=True, nogil=True)
def _hermite(tau, h, u0, u1, d0, d1):
    t2 = tau * tau
    t3 = t2 * tau
    return (
        (2 * t3 - 3 * t2 + 1) * u0
        + (t3 - 2 * t2 + tau) * h * d0
        + (-2 * t3 + 3 * t2) * u1
        + (t3 - t2) * h * d1
    )


@njit(cache=True, nogil=True)
def _hermite_dtau(tau, h, u0, u1, d0, d1):
    t2 = tau * tau
    return (
        (6 * t2 - 6 * tau) * u0
        + (3 * t2 - 4 * tau + 1) * h * d0
        + (-6 * t2 + 6 * tau) * u1
        + (3 * t2 - 2 * tau) * h * d1
    )


@njit(cache=True, nogil=True)
def _invert(theta, U, D, u, tol):
    """theta with U(theta) = u; returns (theta, cell index)."""
    n = U.size
    lo_i, hi_i = 0, n - 1
    while hi_i - lo_i > 1:
        mid = (lo_i + hi_i) // 2
        if U[mid] <= u:
            lo_i = mid
        else:
            hi_i = mid
    i = lo_i
    h = theta[i + 1] - theta[i]
    u0, u1, d0, d1 = U[i], U[i + 1], D[i], D[i + 1]
    du = u1 - u0
    s = (u - u0) / du
    tau = _hermite(s, du, 0.0, 1.0, 1.0 / (d0 * h), 1.0 / (d1 * h))
    tau = min(max(tau, 0.0), 1.0)
    lo, hi = 0.0, 1.0
    for _ in range(60):
        g = _hermite(tau, h, u0, u1, d0, d1) - u
        if g == 0.0:
            break
        if g < 0.0:
            lo = tau
        else:
            hi = tau
        dg = _hermite_dtau(tau, h, u0, u1, d0, d1)
        new = tau - g / dg if dg > 0.0 else -1.0
        if not (lo <= new <= hi):
            new = 0.5 * (lo + hi)
        delta = abs(new - tau) * h
        tau = new
        if delta < tol:
            break
    return theta[i] + tau * h, i


@njit(cache=True, nogil=True)
def _rhs(u, out, dim, dr, vol, a_plus, a_minus, r_end_area, bc_kind, bc_coef,
         evolve_last, reaction_on, kind, s, theta1, theta, U, D, spl, tol):
    n = u.size
    umax = U[U.size - 1]
    status = OK
    for j in range(n):
        if j == n - 1 and not evolve_last:
            out[j] = 0.0
            continue
        uj = u[j]
        if uj < 0.0:
            if uj < -1e-13 * umax:
                return NEGATIVE
            uj = 0.0
        if uj > umax:
            return ABOVE
        if j == 0:
            lap = a_plus[0] * (u[1] - u[0]) / vol[0]
        elif j < n - 1:
            lap = (a_plus[j] * (u[j + 1] - u[j]) - a_minus[j] * (u[j] - u[j - 1])) / vol[j]
        else:
            if bc_kind == ROBIN:
                flux = -bc_coef * u[j]
            else:
                flux = -bc_coef * u[j] * u[j]
            lap = (r_end_area * flux - a_minus[j] * (u[j] - u[j - 1])) / vol[j]
        th, i = _invert(theta, U, D, uj, tol)
        x = th - theta[i]
        dth = ((spl[0, i] * x + spl[1, i]) * x + spl[2, i]) * x + spl[3, i]
        if reaction_on:
            lap += _reaction(kind, s, theta1, th)
        out[j] = dth * lap
    return status


@njit(cache=True, nogil=True)
def run_rk4(u0, dim, dr, vol, a_plus, a_minus, r_end_area, bc_kind, bc_coef, reaction_on,
            kind, s, theta1, theta, U, D, spl, dt, n_steps, every, tol):
    """Fixed-step classical RK4 on u_t = D(theta(u)) (lap u + R(theta(u))).

    Returns (status, step reached, samples) where samples holds u every
    ``every`` steps, starting with the initial state.
    """
    n = u0.size
    evolve_last = bc_kind != DIRICHLET
    n_samples = n_steps // every + 1
    samples = np.empty((n_samples, n))
    u = u0.copy()
    samples[0] = u
    k1 = np.empty(n)
    k2 = np.empty(n)
    k3 = np.empty(n)
    k4 = np.empty(n)
    tmp = np.empty(n)
    args = (dim, dr, vol, a_plus, a_minus, r_end_area, bc_kind, bc_coef, evolve_last,
            reaction_on, kind, s, theta1, theta, U, D, spl, tol)
    for step in range(1, n_steps + 1):
        st = _rhs(u, k1, *args)
        if st != OK:
            return st, step, samples
        for j in range(n):
            tmp[j] = u[j] + 0.5 * dt * k1[j]
        st = _rhs(tmp, k2, *args)
        if st != OK:
            return st, step, samples
        for j in range(n):
            tmp[j] = u[j] + 0.5 * dt * k2[j]
        st = _rhs(tmp, k3, *args)
        if st != OK:
            return st, step, samples
        for j in range(n):
            tmp[j] = u[j] + dt * k3[j]
        st = _rhs(tmp, k4, *args)
        if st != OK:
            return st, step, samples
        for j in range(n):
            u[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j])
        if step % every == 0:
            samples[step // every] = u
    return OK, n_steps, samples
