import math

import numpy as np
import pytest

from logistic_rd.errors import ToleranceFailure
from logistic_rd.ode import StepStats, dopri_integrate
from logistic_rd.roots import bisect, newton_bisect


def test_dopri_exponential():
    t = np.linspace(0.0, 2.0, 11)
    y = dopri_integrate(lambda t, y: y, 0.0, np.array([1.0]), t, rtol=1e-12, atol=1e-14)
    np.testing.assert_allclose(y[:, 0], np.exp(t), rtol=1e-11)


def test_dopri_hits_output_grid_and_counts():
    stats = StepStats()
    t = np.array([0.0, 0.3, 1.7, 3.0])
    y = dopri_integrate(lambda t, y: -2 * t * y, 0.0, np.array([1.0]), t, stats=stats)
    np.testing.assert_allclose(y[:, 0], np.exp(-t * t), rtol=1e-9, atol=1e-12)
    assert stats.accepted > 0 and stats.nfev >= 6 * stats.accepted


def test_dopri_system_oscillator():
    t = np.linspace(0.0, 10.0, 6)
    y = dopri_integrate(lambda t, y: np.array([y[1], -y[0]]), 0.0, np.array([1.0, 0.0]), t)
    np.testing.assert_allclose(y[:, 0], np.cos(t), atol=1e-8)


def test_dopri_fifth_order_error_scaling():
    # the global error with a tolerance sweep shrinks roughly like tol
    errs = []
    for tol in (1e-6, 1e-9):
        y = dopri_integrate(lambda t, y: np.cos(t) * y, 0.0, np.array([1.0]), np.array([0.0, 5.0]),
                            rtol=tol, atol=tol * 1e-2)
        errs.append(abs(y[-1, 0] - math.exp(math.sin(5.0))))
    assert errs[1] < errs[0] * 1e-2


def test_dopri_blowup_raises():
    with pytest.raises(ToleranceFailure):
        dopri_integrate(lambda t, y: y * y, 0.0, np.array([1.0]), np.array([0.0, 2.0]))


def test_bisect_and_newton():
    root = math.sqrt(2.0)
    assert abs(bisect(lambda x: x * x - 2, 0.0, 2.0) - root) < 1e-13
    x = newton_bisect(lambda x: x * x - 2, lambda x: 2 * x, 0.0, 2.0)
    assert abs(x - root) < 1e-12
    assert abs(newton_bisect(math.cos, lambda x: -math.sin(x), 1.0, 2.0) - math.pi / 2) < 1e-12


def test_bisect_requires_bracket():
    with pytest.raises(ValueError):
        bisect(lambda x: x * x + 1, -1.0, 1.0)
