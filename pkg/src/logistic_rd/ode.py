"""Adaptive Dormand-Prince 5(4) integrator.

Explicit embedded pair with first-same-as-last stages. The fifth-order
solution is propagated (local extrapolation), the fourth-order one only
feeds the error estimate. Steps are clipped so that every requested output
abscissa is hit exactly, which avoids the need for dense output.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ToleranceFailure

# Butcher tableau
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array(
    [5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40]
)
_E = _B5 - _B4

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0


class StepStats:
    __slots__ = ("accepted", "rejected", "nfev")

    def __init__(self):
        self.accepted = 0
        self.rejected = 0
        self.nfev = 0

    def __repr__(self):
        return f"StepStats(accepted={self.accepted}, rejected={self.rejected}, nfev={self.nfev})"


def _initial_step(f, t0, y0, f0, direction, rtol, atol):
    # Hairer, Norsett & Wanner, Solving ODEs I, Sec. II.4
    scale = atol + rtol * np.abs(y0)
    d0 = np.sqrt(np.mean((y0 / scale) ** 2))
    d1 = np.sqrt(np.mean((f0 / scale) ** 2))
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    y1 = y0 + direction * h0 * f0
    f1 = f(t0 + direction * h0, y1)
    d2 = np.sqrt(np.mean(((f1 - f0) / scale) ** 2)) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1 / 5)
    return min(100 * h0, h1)


def dopri_integrate(
    f,
    t0: float,
    y0,
    t_out,
    *,
    rtol: float = 1e-10,
    atol: float = 1e-12,
    h0: float | None = None,
    max_steps: int = 1_000_000,
    stats: StepStats | None = None,
):
    """Integrate ``y' = f(t, y)`` from ``t0`` and return ``y`` at each ``t_out``.

    ``t_out`` must be monotone in the direction of integration. ``f`` may
    return non-finite values to signal that a trial stage left the domain;
    such steps are rejected and retried with a smaller step.

    Raises
    ------
    ToleranceFailure
        The step size underflowed (relative to ``t``) before reaching the
        last output point. ``exc.t`` and ``exc.y`` hold the last accepted
        state.
    """
    t_out = np.atleast_1d(np.asarray(t_out, dtype=float))
    y = np.atleast_1d(np.asarray(y0, dtype=float)).copy()
    out = np.empty((t_out.size, y.size))
    if stats is None:
        stats = StepStats()
    if t_out.size == 0:
        return out
    direction = 1.0 if t_out[-1] >= t0 else -1.0

    t = float(t0)
    k = np.empty((7, y.size))
    k[0] = f(t, y)
    stats.nfev += 1
    if h0 is None:
        h = _initial_step(f, t, y, k[0], direction, rtol, atol)
        stats.nfev += 1
    else:
        h = abs(h0)

    idx = 0
    while idx < t_out.size and (t_out[idx] - t) * direction <= 0:
        out[idx] = y
        idx += 1

    steps = 0
    while idx < t_out.size:
        target = t_out[idx]
        remaining = abs(target - t)
        land = h >= remaining
        step = remaining if land else h
        if step <= 16 * np.finfo(float).eps * max(abs(t), 1.0):
            err = ToleranceFailure(f"step size underflow at t={t:.17g}")
            err.t, err.y = t, y.copy()
            raise err
        steps += 1
        if steps > max_steps:
            err = ToleranceFailure(f"exceeded {max_steps} steps at t={t:.17g}")
            err.t, err.y = t, y.copy()
            raise err

        hs = direction * step
        for i in range(1, 7):
            dy = np.dot(_A[i], k[:i])
            k[i] = f(t + _C[i] * hs, y + hs * dy)
        stats.nfev += 6
        y_new = y + hs * np.dot(_B5[:6], k[:6])
        err_vec = hs * np.dot(_E, k)
        scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
        err_norm = float(np.sqrt(np.mean((err_vec / scale) ** 2)))

        if not (math.isfinite(err_norm) and np.all(np.isfinite(y_new))):
            stats.rejected += 1
            h = step * _MIN_FACTOR
            continue
        if err_norm > 1.0:
            stats.rejected += 1
            h = step * max(_MIN_FACTOR, _SAFETY * err_norm ** -0.2)
            continue

        stats.accepted += 1
        t = target if land else t + hs
        y = y_new
        k[0] = k[6]  # FSAL
        factor = _MAX_FACTOR if err_norm == 0 else min(_MAX_FACTOR, _SAFETY * err_norm ** -0.2)
        # a landing step may be artificially short; do not let it shrink h
        h = max(h, step * factor) if land else step * factor
        if land:
            out[idx] = y
            idx += 1
    return out
