"""Compatible nonlinear diffusivities and the Kirchhoff accumulator.

Given a reaction term R and a reduction (A, kappa), the diffusivity that
admits the separable solution u = exp(A t) Phi(x) solves

    dU/dtheta = D(theta) = A U / (R(theta) - kappa U),   U(0) = 0,

with U the Kirchhoff accumulator int_0^theta D. Three routes are provided:

* :func:`solve_profile` integrates the ODE with an adaptive Dormand-Prince
  pair (the reference construction);
* :func:`picard_iterate` applies the fixed-point map
  D -> A int D / (R - kappa int D) on a tabulated grid;
* :func:`closed_form_iterate` evaluates the analytic first iterates of
  that map started from a constant.

:func:`laplace_branch_D` gives the kappa = 0 closed forms, which are
inadmissible as population models and kept for diagnostics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.integrate import cumulative_simpson
from scipy.interpolate import CubicSpline

from .errors import (
    BlowUp,
    DomainSingularity,
    EvaluationAtSingularity,
    InadmissibleParams,
    NonPositiveD,
    OutOfRange,
    ToleranceFailure,
    WrongRegime,
)
from .model import Kind, ReactionModel, SymmetryParams, d0_from_rate, reaction_eval
from .ode import StepStats, dopri_integrate

DEFAULT_GRID = 1001
DEFAULT_RTOL = 1e-10
DEFAULT_ATOL = 1e-12
LAUNCH_FRACTION = 1e-6
INVERT_TOL = 1e-12


def default_theta_max(kind: Kind | str) -> float:
    return 2.0 if Kind(kind) is Kind.FISHER else 1.0


@dataclass(frozen=True, eq=False)
class DiffusivityProfile:
    """Tabulated (theta, U, D) on a strictly increasing grid starting at 0.

    U between nodes is the cubic Hermite interpolant with slopes D, which is
    checked to be monotone on every cell. D between nodes is a not-a-knot
    cubic spline through the nodal values.
    """

    theta: np.ndarray
    U: np.ndarray
    D: np.ndarray
    model: ReactionModel
    params: SymmetryParams
    label: str = "tabulated"
    info: dict = field(default_factory=dict)

    def __post_init__(self):
        th = np.array(self.theta, dtype=float)
        U = np.array(self.U, dtype=float)
        D = np.array(self.D, dtype=float)
        if not (th.ndim == 1 and th.shape == U.shape == D.shape and th.size >= 4):
            raise ValueError("theta, U and D must be 1-D arrays of equal length >= 4")
        if th[0] != 0.0 or np.any(np.diff(th) <= 0):
            raise ValueError("theta grid must start at 0 and increase strictly")
        if U[0] != 0.0:
            raise ValueError("Kirchhoff accumulator must vanish at theta = 0")
        bad = np.flatnonzero(~(D > 0))
        if bad.size:
            i = bad[0]
            raise NonPositiveD(f"D({th[i]:.6g}) = {D[i]:.6g} is not positive")
        dU = np.diff(U)
        if np.any(dU <= 0):
            raise NonPositiveD("Kirchhoff accumulator is not strictly increasing")
        h = np.diff(th)
        alpha = D[:-1] * h / dU
        beta = D[1:] * h / dU
        if np.any(alpha * alpha + beta * beta > 9.0):
            raise ValueError("grid too coarse for a monotone Hermite interpolant of U")
        for name, arr in (("theta", th), ("U", U), ("D", D)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def theta_max(self) -> float:
        return float(self.theta[-1])

    @property
    def U_max(self) -> float:
        return float(self.U[-1])

    @cached_property
    def _d_spline(self):
        return CubicSpline(self.theta, self.D)

    def _locate(self, th):
        i = np.searchsorted(self.theta, th, side="right") - 1
        return np.clip(i, 0, self.theta.size - 2)

    def U_at(self, theta):
        """Kirchhoff accumulator U(theta) by cubic Hermite interpolation."""
        th = np.asarray(theta, dtype=float)
        if np.any(th < 0) or np.any(th > self.theta_max):
            raise OutOfRange(f"theta outside [0, {self.theta_max}]")
        i = self._locate(th)
        x0 = self.theta[i]
        h = self.theta[i + 1] - x0
        tau = (th - x0) / h
        out = _hermite(tau, h, self.U[i], self.U[i + 1], self.D[i], self.D[i + 1])
        return out if out.ndim else float(out)

    def D_at(self, theta):
        th = np.asarray(theta, dtype=float)
        if np.any(th < 0) or np.any(th > self.theta_max):
            raise OutOfRange(f"theta outside [0, {self.theta_max}]")
        out = self._d_spline(th)
        return out if out.ndim else float(out)

    def invert(self, u, tol: float = INVERT_TOL):
        """Density theta with U(theta) = u (vectorised safeguarded Newton)."""
        uu = np.asarray(u, dtype=float)
        if np.any(uu < 0) or np.any(uu > self.U_max):
            raise OutOfRange(f"Kirchhoff value outside [0, {self.U_max}]")
        out = _invert_hermite(self.theta, self.U, self.D, uu, tol)
        return out if out.ndim else float(out)

    def relation_residual(self):
        """R - A U / D - kappa U at the nodes."""
        A, kappa = self.params.A, self.params.kappa
        return reaction_eval(self.model, self.theta) - A * self.U / self.D - kappa * self.U

    def with_D_scaled(self, factor: float) -> "DiffusivityProfile":
        """Copy with D multiplied by ``factor`` and U left unchanged (test helper)."""
        return DiffusivityProfile(
            self.theta, self.U, self.D * factor, self.model, self.params, f"{self.label}*{factor}"
        )

    def rows(self):
        return zip(self.theta, self.U, self.D)


def kirchhoff_u(profile: DiffusivityProfile, theta):
    return profile.U_at(theta)


def invert_kirchhoff(profile: DiffusivityProfile, u):
    return profile.invert(u)


def _hermite(tau, h, u0, u1, d0, d1):
    t2 = tau * tau
    t3 = t2 * tau
    return (
        (2 * t3 - 3 * t2 + 1) * u0
        + (t3 - 2 * t2 + tau) * h * d0
        + (-2 * t3 + 3 * t2) * u1
        + (t3 - t2) * h * d1
    )


def _hermite_slope(tau, h, u0, u1, d0, d1):
    t2 = tau * tau
    return (
        (6 * t2 - 6 * tau) * u0 / h
        + (3 * t2 - 4 * tau + 1) * d0
        + (-6 * t2 + 6 * tau) * u1 / h
        + (3 * t2 - 2 * tau) * d1
    )


def _invert_hermite(theta, U, D, u, tol):
    shape = u.shape
    u = u.reshape(-1)
    i = np.clip(np.searchsorted(U, u, side="right") - 1, 0, theta.size - 2)
    x0 = theta[i]
    h = theta[i + 1] - x0
    u0, u1, d0, d1 = U[i], U[i + 1], D[i], D[i + 1]
    lo = np.zeros_like(u)
    hi = np.ones_like(u)
    # initial guess from the inverse Hermite cubic (slopes 1/D)
    du = u1 - u0
    s = (u - u0) / du
    tau = _hermite(s, du, 0.0, 1.0, 1.0 / (d0 * h), 1.0 / (d1 * h))
    tau = np.clip(tau, 0.0, 1.0)
    for _ in range(60):
        g = _hermite(tau, h, u0, u1, d0, d1) - u
        lo = np.where(g < 0, tau, lo)
        hi = np.where(g > 0, tau, hi)
        dg = _hermite_slope(tau, h, u0, u1, d0, d1) * h  # d/dtau
        with np.errstate(divide="ignore", invalid="ignore"):
            newton = tau - g / dg
        ok = (dg > 0) & (newton >= lo) & (newton <= hi)
        new = np.where(ok, newton, 0.5 * (lo + hi))
        new = np.where(g == 0, tau, new)
        delta = np.abs(new - tau) * h
        tau = new
        if np.all(delta < tol):
            break
    return (x0 + tau * h).reshape(shape)


def _check_reduction(params: SymmetryParams):
    if not params.kappa > 0:
        raise InadmissibleParams("diffusivity construction needs kappa = K^2 > 0")
    if not params.A < 0:
        raise InadmissibleParams(f"A = {params.A} must be negative for an admissible solution")


def solve_profile(
    model: ReactionModel,
    params: SymmetryParams,
    theta_max: float | None = None,
    tol: float = DEFAULT_RTOL,
    *,
    atol: float = DEFAULT_ATOL,
    n_grid: int = DEFAULT_GRID,
    launch: float = LAUNCH_FRACTION,
) -> DiffusivityProfile:
    """Integrate dU/dtheta = A U / (R - kappa U) from the singular start.

    The 0/0 start at theta = 0 is launched from the first-order series
    U(eps) = D(0) eps, eps = ``launch * theta_max``, with D(0) given by the
    consistency relation for the model. Regular solutions attract nearby
    trajectories as theta grows, so the launch error decays.

    Raises
    ------
    BlowUp
        ``R - kappa U`` reaches zero before ``theta_max``.
    NonPositiveD
        A non-positive diffusivity appears on the grid.
    ToleranceFailure
        The integrator could not meet the tolerance for another reason.
    """
    _check_reduction(params)
    if theta_max is None:
        theta_max = default_theta_max(model.kind)
    if not theta_max > 0:
        raise ValueError("theta_max must be positive")
    A, kappa = params.A, params.kappa
    d0 = d0_from_rate(model, params.K, A)
    if not d0 > 0:
        raise InadmissibleParams(f"consistency gives D(0) = {d0:.6g} <= 0")

    def denominator(th, u):
        return reaction_eval(model, th) - kappa * u

    def rhs(th, y):
        w = denominator(th, y[0])
        # R - kappa U is negative on the regular branch; a sign change is blow-up
        if not w < 0:
            return np.array([np.nan])
        return np.array([A * y[0] / w])

    grid = np.linspace(0.0, theta_max, n_grid)
    eps = launch * theta_max
    if eps >= grid[1]:
        raise ValueError("launch point must precede the first grid node")
    stats = StepStats()
    try:
        sol = dopri_integrate(rhs, eps, [d0 * eps], grid[1:], rtol=tol, atol=atol, stats=stats)
    except ToleranceFailure as exc:
        th_fail, u_fail = exc.t, float(exc.y[0])
        w = denominator(th_fail, u_fail)
        d_fail = A * u_fail / w if w != 0 else math.inf
        if abs(w) <= 1e-6 * max(1.0, abs(kappa * u_fail)) or d_fail > 1e6 * d0:
            raise BlowUp(
                f"R - kappa*U vanishes near theta = {th_fail:.10g}; D diverges "
                f"(choose theta_max below this value)"
            ) from exc
        raise
    U = np.concatenate([[0.0], sol[:, 0]])
    w = denominator(grid, U)
    D = np.empty_like(U)
    D[0] = d0
    D[1:] = A * U[1:] / w[1:]
    info = {
        "rtol": tol,
        "atol": atol,
        "launch": eps,
        "accepted_steps": stats.accepted,
        "rejected_steps": stats.rejected,
        "nfev": stats.nfev,
    }
    return DiffusivityProfile(grid, U, D, model, params, "ode", info)


def constant_profile(
    model: ReactionModel,
    params: SymmetryParams,
    value: float,
    theta_max: float | None = None,
    n_grid: int = DEFAULT_GRID,
) -> DiffusivityProfile:
    """D identically equal to ``value`` (the usual start of the fixed-point map)."""
    if theta_max is None:
        theta_max = default_theta_max(model.kind)
    grid = np.linspace(0.0, theta_max, n_grid)
    return DiffusivityProfile(
        grid, value * grid, np.full_like(grid, value), model, params, "constant"
    )


def tabulated_profile(
    model: ReactionModel, params: SymmetryParams, theta, D, label: str = "tabulated"
) -> DiffusivityProfile:
    """Profile from nodal D values; U is the composite Simpson running integral."""
    theta = np.asarray(theta, dtype=float)
    D = np.asarray(D, dtype=float)
    U = cumulative_simpson(D, x=theta, initial=0.0)
    return DiffusivityProfile(theta, U, D, model, params, label)


def start_value(model: ReactionModel, params: SymmetryParams) -> float:
    """Constant D used to start the fixed-point map.

    Fisher and Huxley start from D(0); FHN starts from D(1) = -A/K^2 so that
    every iterate is exact at the carrying capacity.
    """
    if model.kind is Kind.FHN:
        return -params.A / params.kappa
    return d0_from_rate(model, params.K, params.A)


def _origin_limit(model, params, d_prev0):
    # lim_{theta->0} A U / (R - kappa U) with U ~ d_prev0 * theta
    den = model.derivative(0.0) - params.kappa * d_prev0
    if den == 0:
        raise BlowUp("fixed-point map is singular at theta = 0")
    return params.A * d_prev0 / den


def picard_iterate(
    model: ReactionModel, params: SymmetryParams, current: DiffusivityProfile
) -> DiffusivityProfile:
    """One application of D -> A int_0 D / (R - kappa int_0 D) on the grid.

    The running integral uses the composite Simpson rule; theta = 0 takes
    the one-sided limit of the quotient.
    """
    th = current.theta
    A, kappa = params.A, params.kappa
    u_prev = cumulative_simpson(current.D, x=th, initial=0.0)
    w = reaction_eval(model, th) - kappa * u_prev
    inner = w[1:]
    if np.any(inner == 0) or np.any(np.sign(inner) != np.sign(inner[0])):
        k = int(np.flatnonzero((inner == 0) | (np.sign(inner) != np.sign(inner[0])))[0]) + 1
        raise BlowUp(f"fixed-point denominator changes sign near theta = {th[k]:.6g}")
    D = np.empty_like(th)
    D[0] = _origin_limit(model, params, current.D[0])
    D[1:] = A * u_prev[1:] / inner
    U = cumulative_simpson(D, x=th, initial=0.0)
    return DiffusivityProfile(th, U, D, model, params, "picard", {"parent": current.label})


# ---------------------------------------------------------------- closed forms


def _fhn_beta_sq(model: ReactionModel, A: float) -> float:
    t1 = model.theta1
    return -0.25 * t1 * t1 + 0.5 * t1 - 0.25 - A / model.s


def _finish(num, den, theta, at_origin):
    th = np.asarray(theta, dtype=float)
    num = np.asarray(num, dtype=float)
    den = np.asarray(den, dtype=float)
    pole = (den == 0) & (th != 0)
    if np.any(pole):
        raise DomainSingularity(f"pole of the iterate at theta = {th[pole].ravel()[0]:.6g}")
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(th == 0, at_origin, num / np.where(den == 0, 1.0, den))
    if not np.all(np.isfinite(out)):
        raise DomainSingularity("iterate is not finite at the requested theta")
    return out if out.ndim else float(out)


def closed_form_iterate(model: ReactionModel, params: SymmetryParams, level: int, theta):
    """Analytic iterate ``D_level`` of the fixed-point map (level 0, 1 or 2).

    Fisher (start D0 = (s - A)/K^2)::

        D1 = |A| D0 / (s theta + K^2 D0 - s)
        D2 = -A^2 D0 L / (s^2 theta (1 - theta) + K^2 A D0 L),
        L  = ln[(s theta + K^2 D0 - s) / (K^2 D0 - s)]

    Huxley (start D0 = -A/K^2, beta = sqrt|A/s + 1/4|)::

        D1 = -(A^2/K^2) / (s theta (1 - theta) + A)
        D2 = (A^3/K^2) T / (beta s^2 theta^2 (1 - theta) - A^2 T),
        T  = atan((theta - 1/2)/beta) + atan(1/(2 beta))

    FHN (start D0 = -A/K^2, P = theta^2 - (theta1 + 1) theta + theta1 - A/s)::

        D1 = (A^2 / (K^2 s)) / P(theta)
        D2 = (A^3/K^2) T / (beta s^2 theta (1 - theta)(theta - theta1) - A^2 T),
        T  = atan((theta - (theta1 + 1)/2)/beta) + atan((theta1 + 1)/(2 beta)),
        beta^2 = -theta1^2/4 + theta1/2 - 1/4 - A/s

    The removable 0/0 of D2 at theta = 0 is replaced by its limit.

    Raises
    ------
    WrongRegime
        Level 2 requested where the arctangent form does not apply (the
        quadratic in the D1 denominator has real roots).
    DomainSingularity
        Non-removable pole at a requested theta.
    """
    if level not in (0, 1, 2):
        raise ValueError("level must be 0, 1 or 2")
    _check_reduction(params)
    th = np.asarray(theta, dtype=float)
    s, A, K2 = model.s, params.A, params.kappa
    d_start = start_value(model, params)
    if level == 0:
        out = np.full_like(th, d_start)
        return out if out.ndim else float(out)

    if model.kind is Kind.FISHER:
        d0 = d_start
        if level == 1:
            return _finish(abs(A) * d0, s * th + K2 * d0 - s, th, d0)
        arg = (s * th + K2 * d0 - s) / (K2 * d0 - s)
        if np.any(arg <= 0):
            raise DomainSingularity("logarithm argument is not positive")
        L = np.log(arg)
        num = -A * A * d0 * L
        den = s * s * th * (1 - th) + K2 * A * d0 * L
        return _finish(num, den, th, _origin_limit(model, params, d0))

    if model.kind is Kind.HUXLEY:
        if level == 1:
            return _finish(-(A * A / K2), s * th * (1 - th) + A, th, -(A * A / K2) / A)
        if not A / s + 0.25 < 0:
            raise WrongRegime(
                "Huxley D2 in arctangent form needs A/s < -1/4 (D1 has real poles otherwise)"
            )
        beta = math.sqrt(abs(A / s + 0.25))
        T = np.arctan((th - 0.5) / beta) + np.arctan(1.0 / (2.0 * beta))
        num = A**3 / K2 * T
        den = beta * s * s * th * th * (1 - th) - A * A * T
        return _finish(num, den, th, _origin_limit(model, params, d_start))

    t1 = model.theta1
    c = A * A / (K2 * s)

    def P(x):
        return x * x - (t1 + 1.0) * x + t1 - A / s

    if level == 1:
        return _finish(np.full_like(th, c), P(th), th, c / P(0.0))
    beta_sq = _fhn_beta_sq(model, A)
    if not beta_sq > 0:
        raise WrongRegime(
            "FHN D2 is only formed when P(theta) has complex roots "
            f"(beta^2 = {beta_sq:.6g} <= 0); real or repeated roots make it singular"
        )
    beta = math.sqrt(beta_sq)
    mid = 0.5 * (t1 + 1.0)
    T = np.arctan((th - mid) / beta) + np.arctan(mid / beta)
    num = A**3 / K2 * T
    den = beta * s * s * th * (1 - th) * (th - t1) - A * A * T
    return _finish(num, den, th, _origin_limit(model, params, c / P(0.0)))


# ------------------------------------------------------------- kappa = 0 branch


@dataclass(frozen=True)
class DivergenceReport:
    """Local behaviour of a kappa = 0 diffusivity at the zeros of R.

    ``exponents`` maps each zero to the power-law exponent of D there (or to
    ``+inf``/``-inf`` when an essential exponential factor dominates).
    """

    exponents: dict
    divergent_at: tuple

    def describe(self) -> str:
        if not self.divergent_at:
            return "bounded at all zeros of R"
        pts = ", ".join(f"theta -> {p:g}" for p in self.divergent_at)
        return f"D -> infinity as {pts}"


def _divergence(model: ReactionModel, A: float) -> DivergenceReport:
    alpha = A / model.s
    if model.kind is Kind.FISHER:
        exps = {0.0: -2.0 - alpha, 1.0: alpha}
    elif model.kind is Kind.HUXLEY:
        # exp(-A/(s theta)) dominates at 0 unless A = 0: it blows up for A < 0
        at0 = -math.inf if A < 0 else (math.inf if A > 0 else -2.0)
        exps = {0.0: at0, 1.0: -1.0 - alpha}
    else:
        t1 = model.theta1
        exps = {
            0.0: -(1.0 + alpha / t1),
            1.0: -1.0 + alpha / (t1 - 1.0),
            float(t1): -1.0 - alpha / (t1 * (t1 - 1.0)),
        }
    divergent = tuple(sorted(p for p, e in exps.items() if e < 0))
    return DivergenceReport(exps, divergent)


def laplace_branch_D(model: ReactionModel, A: float, theta, c1: float = 1.0):
    """kappa = 0 diffusivity and its divergence report.

    Fisher:  -(A/s) theta^-2 (1/theta - 1)^(A/s)
    Huxley:  c1 theta^-1 (1 - theta)^-2 |1 - 1/theta|^(1 - A/s) exp(-A/(s theta))
    FHN:     c1 theta^-(1 + a/theta1) |theta - 1|^(-1 + a/(theta1 - 1))
                |theta - theta1|^(-1 - a/(theta1 (theta1 - 1))),   a = A/s

    Bases that are negative on (0, 1) enter through their modulus; the sign
    is absorbed in ``c1``. The Fisher form is scaled by ``c1`` as well.
    """
    th = np.asarray(theta, dtype=float)
    if np.any(th <= 0) or np.any(th >= 1):
        raise OutOfRange("kappa = 0 forms are evaluated on the open interval (0, 1)")
    if model.kind is Kind.FHN and model.theta1 in (0.0, 1.0):
        raise EvaluationAtSingularity("theta1 coincides with another zero of R")
    if model.kind is Kind.FHN and np.any(th == model.theta1):
        raise EvaluationAtSingularity(f"theta = theta1 = {model.theta1} is a zero of R")
    s = model.s
    a = A / s
    if model.kind is Kind.FISHER:
        D = c1 * (-a) * th**-2.0 * (1.0 / th - 1.0) ** a
    elif model.kind is Kind.HUXLEY:
        with np.errstate(over="ignore"):
            D = c1 * th**-1.0 * (1.0 - th) ** -2.0 * np.abs(1.0 - 1.0 / th) ** (1.0 - a) * np.exp(-a / th)
    else:
        t1 = model.theta1
        D = (
            c1
            * th ** -(1.0 + a / t1)
            * np.abs(th - 1.0) ** (-1.0 + a / (t1 - 1.0))
            * np.abs(th - t1) ** (-1.0 - a / (t1 * (t1 - 1.0)))
        )
    D = D if np.ndim(D) else float(D)
    return D, _divergence(model, A)
