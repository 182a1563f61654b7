"""Bracketed scalar root finders."""

from __future__ import annotations

import math


def bisect(f, a: float, b: float, xtol: float = 1e-13, max_iter: int = 200) -> float:
    """Root of ``f`` in ``[a, b]`` by plain bisection.

    ``f(a)`` and ``f(b)`` must differ in sign (or one of them be zero).
    Iterates until the bracket is narrower than ``xtol`` or stops shrinking
    in floating point.
    """
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if (fa > 0) == (fb > 0):
        raise ValueError(f"no sign change on [{a}, {b}]: f(a)={fa}, f(b)={fb}")
    for _ in range(max_iter):
        m = 0.5 * (a + b)
        if b - a <= xtol or m in (a, b):
            return m
        fm = f(m)
        if fm == 0.0:
            return m
        if (fm > 0) == (fa > 0):
            a, fa = m, fm
        else:
            b = m
    return 0.5 * (a + b)


def newton_bisect(
    f, fprime, a: float, b: float, xtol: float = 1e-12, max_iter: int = 100, x0: float | None = None
) -> float:
    """Safeguarded Newton iteration inside a sign-change bracket.

    A Newton step that leaves the current bracket, or that fails to halve
    it, is replaced by a bisection step (``rtsafe`` style).
    """
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if (fa > 0) == (fb > 0):
        raise ValueError(f"no sign change on [{a}, {b}]")
    # orient so that f(lo) < 0
    lo, hi = (a, b) if fa < 0 else (b, a)
    x = 0.5 * (a + b) if x0 is None else min(max(x0, min(a, b)), max(a, b))
    dx_old = abs(b - a)
    dx = dx_old
    fx, dfx = f(x), fprime(x)
    for _ in range(max_iter):
        if fx == 0.0:
            return x
        newton_ok = (
            dfx != 0.0
            and math.isfinite(dfx)
            and ((x - hi) * dfx - fx) * ((x - lo) * dfx - fx) < 0.0
            and abs(2.0 * fx) <= abs(dx_old * dfx)
        )
        dx_old = dx
        if newton_ok:
            dx = fx / dfx
            x_new = x - dx
        else:
            dx = 0.5 * (hi - lo)
            x_new = lo + dx
        if abs(dx) < xtol or x_new == x:
            return x_new
        x = x_new
        fx, dfx = f(x), fprime(x)
        if fx < 0:
            lo = x
        else:
            hi = x
    return x
