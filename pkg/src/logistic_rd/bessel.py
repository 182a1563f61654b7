"""Bessel functions of order 0 and 1, evaluated in-repo.

J0, J1: ascending power series for |x| <= 8, Miller's backward recurrence
with the normalisation J0 + 2*(J2 + J4 + ...) = 1 beyond. Absolute error is
a few ulp of 1 on both branches.

I0, I1 by ascending series; K0, K1 by quadrature of their integral
representation. These only serve the evanescent (kappa < 0) diagnostic
modes.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .roots import newton_bisect

SERIES_LIMIT = 8.0
_SERIES_TERMS = 48
_K_STEP = 0.05


def _as_array(x):
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def _j_series(x):
    z = 0.25 * x * x
    t0 = np.ones_like(x)
    t1 = np.ones_like(x)
    s0 = t0.copy()
    s1 = t1.copy()
    for k in range(1, _SERIES_TERMS):
        t0 = t0 * (-z) / (k * k)
        t1 = t1 * (-z) / (k * (k + 1))
        s0 += t0
        s1 += t1
    return s0, 0.5 * x * s1


def _j_miller(x):
    """J0, J1 for x > 0 by backward recurrence J_{k-1} = (2k/x) J_k - J_{k+1}."""
    xmax = float(np.max(x))
    m = int(xmax + 25.0 + 6.0 * xmax ** (1.0 / 3.0))
    m += m % 2
    j_next = np.zeros_like(x)  # J_{k+1}
    j_cur = np.full_like(x, 1e-30)  # J_k, arbitrary scale
    norm = np.zeros_like(x)
    j1 = np.zeros_like(x)
    for k in range(m, 0, -1):
        j_prev = (2.0 * k / x) * j_cur - j_next
        j_next, j_cur = j_cur, j_prev
        # j_cur is now J_{k-1}
        if (k - 1) % 2 == 0 and k - 1 > 0:
            norm += 2.0 * j_cur
        if k - 1 == 1:
            j1 = j_cur.copy()
        big = np.abs(j_cur) > 1e200
        if np.any(big):
            scale = np.where(big, 1e-200, 1.0)
            j_cur *= scale
            j_next *= scale
            norm *= scale
            j1 *= scale
    j0 = j_cur
    norm += j0
    return j0 / norm, j1 / norm


def j0_j1(x):
    """Return ``(J0(x), J1(x))`` for scalar or array ``x``."""
    arr, scalar = _as_array(x)
    ax = np.abs(arr)
    j0 = np.empty_like(ax)
    j1 = np.empty_like(ax)
    small = ax <= SERIES_LIMIT
    if np.any(small):
        j0[small], j1[small] = _j_series(ax[small])
    if np.any(~small):
        j0[~small], j1[~small] = _j_miller(ax[~small])
    j1 = np.where(arr < 0, -j1, j1)
    if scalar:
        return float(j0), float(j1)
    return j0, j1


def j0(x):
    return j0_j1(x)[0]


def j1(x):
    return j0_j1(x)[1]


def _i_series(x):
    z = 0.25 * x * x
    t0 = np.ones_like(x)
    t1 = np.ones_like(x)
    s0 = t0.copy()
    s1 = t1.copy()
    k = 1
    while True:
        t0 = t0 * z / (k * k)
        t1 = t1 * z / (k * (k + 1))
        s0 += t0
        s1 += t1
        if np.all(t0 <= 1e-17 * s0) and np.all(t1 <= 1e-17 * s1):
            break
        k += 1
        if k > 2000:
            break
    return s0, 0.5 * x * s1


def i0_i1(x):
    """Modified Bessel functions ``(I0(x), I1(x))``."""
    arr, scalar = _as_array(x)
    ax = np.abs(arr)
    i0, i1 = _i_series(ax)
    i1 = np.where(arr < 0, -i1, i1)
    if scalar:
        return float(i0), float(i1)
    return i0, i1


def k0_k1(x):
    """Modified Bessel functions of the second kind ``(K0(x), K1(x))``, x > 0.

    Trapezoidal rule on K_n(x) = int_0^inf cosh(n t) exp(-x cosh t) dt. The
    integrand is even and analytic in a strip, so the rule converges
    geometrically in the step size.
    """
    arr, scalar = _as_array(x)
    if np.any(arr <= 0):
        raise ValueError("K0/K1 are defined for x > 0 only")
    flat = arr.reshape(-1)
    t_end = float(np.arccosh(745.0 / flat.min() + 1.0))
    t = np.arange(0.0, t_end + _K_STEP, _K_STEP)
    w = np.full(t.size, _K_STEP)
    w[0] *= 0.5
    ch = np.cosh(t)
    e = np.exp(-np.outer(flat, ch))
    k0 = (e @ w).reshape(arr.shape)
    k1 = (e @ (w * ch)).reshape(arr.shape)
    if scalar:
        return float(k0), float(k1)
    return k0, k1


@lru_cache(maxsize=None)
def first_zero_j0() -> float:
    """First positive zero of J0, by safeguarded Newton (J0' = -J1) on [2, 3]."""
    return newton_bisect(lambda x: j0(x), lambda x: -j1(x), 2.0, 3.0, xtol=1e-15)
