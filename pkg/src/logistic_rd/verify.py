"""Independent checks of exact solutions.

* :func:`pde_residual` evaluates F(u) u_t - lap u - Q(u) for an assembled
  solution, with lap u either from the Helmholtz identity (``path="analytic"``)
  or from fourth-order central differences (``path="fd"``).
* :func:`relation_residual` checks R = A U / D + kappa U on a profile grid.
* :func:`fd_simulate` is a radial method-of-lines solver for the nonlinear
  PDE, used as an end-to-end oracle.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import _fdkernel as kern
from .diffusivity import (
    DiffusivityProfile,
    closed_form_iterate,
    constant_profile,
    picard_iterate,
    start_value,
    tabulated_profile,
)
from .errors import (
    AboveRange,
    BCInconsistent,
    GridMismatch,
    PositivityViolation,
    StabilityViolation,
    WrongRegime,
)
from .model import Kind, ReactionModel, SymmetryParams, reaction_eval
from .solution import ExactSolution
from .spatial import phi

STABILITY_C = 0.25
_KIND_CODE = {Kind.FISHER: kern.FISHER, Kind.HUXLEY: kern.HUXLEY, Kind.FHN: kern.FHN}


@dataclass
class ResidualReport:
    check: str
    max_abs: float
    rms: float
    n_samples: int
    grid: int | None = None
    dr: float | None = None
    dt: float | None = None
    scale: float | None = None
    order_estimate: float | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def residual_scale(sol: ExactSolution) -> float:
    return max(abs(sol.A) * sol.profile.U_max, sol.model.s)


def _report(check, res, **kw):
    res = np.asarray(res, dtype=float).ravel()
    return ResidualReport(
        check, float(np.max(np.abs(res))), float(np.sqrt(np.mean(res * res))), res.size, **kw
    )


def _fd_laplacian(sol: ExactSolution, r, h):
    mode = sol.mode
    u = {k: np.asarray(phi(mode, np.abs(r + k * h))) for k in (-2, -1, 0, 1, 2)}
    u_rr = (-u[-2] + 16 * u[-1] - 30 * u[0] + 16 * u[1] - u[2]) / (12 * h * h)
    u_r = (u[-2] - 8 * u[-1] + 8 * u[1] - u[2]) / (12 * h)
    with np.errstate(divide="ignore", invalid="ignore"):
        lap = np.where(r == 0, mode.dim * u_rr, u_rr + (mode.dim - 1) * u_r / np.where(r == 0, 1, r))
    return lap


def pde_residual(
    sol: ExactSolution, n_r: int = 65, n_t: int = 33, path: str = "analytic", t_end: float | None = None
) -> ResidualReport:
    """Residual of F(u) u_t = lap u + Q(u) on an (r, t) sample grid.

    F = 1/D and Q = R are evaluated at theta = U^-1(u); u_t = A u exactly.
    Samples cover r in [0, r1] and t in [0, t_end] (default 2/|A|).
    """
    if n_r < 33 or n_t < 2:
        raise ValueError("need n_r >= 33 and n_t >= 2")
    if path not in ("analytic", "fd"):
        raise ValueError("path must be 'analytic' or 'fd'")
    t_end = 2.0 / abs(sol.A) if t_end is None else t_end
    r = np.linspace(0.0, sol.r1, n_r)
    h = r[1] - r[0]
    times = np.linspace(0.0, t_end, n_t)
    if path == "analytic":
        lap_shape = -sol.mode.kappa * np.asarray(phi(sol.mode, r))
    else:
        lap_shape = _fd_laplacian(sol, r, h)
    res = []
    for t in times:
        decay = math.exp(sol.A * t)
        u = decay * np.asarray(phi(sol.mode, r))
        u[-1] = 0.0
        u = np.maximum(u, 0.0)
        th = sol.profile.invert(u)
        D = sol.profile.D_at(th)
        res.append(sol.A * u / D - decay * lap_shape - reaction_eval(sol.model, th))
    return _report(
        f"pde_residual[{path}]", res, grid=n_r, dr=h, dt=times[1] - times[0], scale=residual_scale(sol)
    )


def fd_convergence(sol: ExactSolution, grids=(65, 129, 257), n_t: int = 9) -> list[ResidualReport]:
    """FD-path residuals on successively doubled grids, with observed orders."""
    reports = [pde_residual(sol, n, n_t, path="fd") for n in grids]
    for prev, cur in zip(reports, reports[1:]):
        cur.order_estimate = math.log(prev.max_abs / cur.max_abs) / math.log(prev.dr / cur.dr)
    return reports


def relation_residual(profile: DiffusivityProfile, params: SymmetryParams | None = None) -> ResidualReport:
    """R(theta) - A U / D - kappa U over the profile grid."""
    params = profile.params if params is None else params
    res = reaction_eval(profile.model, profile.theta) - params.A * profile.U / profile.D - params.kappa * profile.U
    return _report("relation_residual", res, grid=profile.theta.size)


# ------------------------------------------------------------------ simulator


@dataclass(frozen=True)
class BoundaryCondition:
    """Outer boundary: ``dirichlet`` (u = 0), ``robin`` (-u_r = p u) or
    ``radiation`` (-u_r = H u^2)."""

    kind: str = "dirichlet"
    coef: float = 0.0

    def __post_init__(self):
        if self.kind not in ("dirichlet", "robin", "radiation"):
            raise BCInconsistent(f"unknown boundary condition {self.kind!r}")
        if self.coef < 0:
            raise BCInconsistent(f"{self.kind} coefficient must be non-negative, got {self.coef}")

    @classmethod
    def dirichlet(cls):
        return cls("dirichlet")

    @classmethod
    def robin(cls, p: float):
        return cls("robin", p)

    @classmethod
    def radiation(cls, H: float):
        return cls("radiation", H)

    @property
    def code(self) -> int:
        return {"dirichlet": kern.DIRICHLET, "robin": kern.ROBIN, "radiation": kern.RADIATION}[self.kind]


@dataclass(frozen=True, eq=False)
class FDSimState:
    r: np.ndarray
    theta: np.ndarray
    u: np.ndarray
    t: float
    bc: BoundaryCondition
    model: ReactionModel
    profile: DiffusivityProfile


@dataclass(eq=False)
class Trajectory:
    """Sampled simulator output; ``u`` and ``theta`` have shape (times, radii)."""

    times: np.ndarray
    r: np.ndarray
    u: np.ndarray
    theta: np.ndarray
    dt: float
    dim: int
    bc: BoundaryCondition
    model: ReactionModel
    profile: DiffusivityProfile
    info: dict = field(default_factory=dict)

    @property
    def states(self):
        return [
            FDSimState(self.r, self.theta[k], self.u[k], float(t), self.bc, self.model, self.profile)
            for k, t in enumerate(self.times)
        ]

    def table(self) -> np.ndarray:
        """Rows (t, r, u, theta), time-major."""
        m, n = self.u.shape
        return np.column_stack(
            [np.repeat(self.times, n), np.tile(self.r, m), self.u.ravel(), self.theta.ravel()]
        )

    def discrete_mass(self, field_name: str = "u") -> np.ndarray:
        """Control-volume integral of ``u`` (or ``theta``) times r^(N-1)."""
        vol = control_volumes(self.r, self.dim)
        return getattr(self, field_name) @ vol


def control_volumes(r: np.ndarray, dim: int) -> np.ndarray:
    """Volumes int r^(N-1) dr of the cells [r_{i-1/2}, r_{i+1/2}] clipped to [0, r_end]."""
    dr = r[1] - r[0]
    left = np.maximum(r - 0.5 * dr, 0.0)
    right = np.minimum(r + 0.5 * dr, r[-1])
    return (right**dim - left**dim) / dim


def stable_dt(dr: float, profile: DiffusivityProfile) -> float:
    return STABILITY_C * dr * dr / float(np.max(profile.D))


def fd_simulate(
    initial,
    model: ReactionModel,
    profile: DiffusivityProfile,
    bc: BoundaryCondition,
    t_end: float,
    dt: float | None = None,
    *,
    radius: float,
    dim: int = 2,
    n_samples: int = 11,
    reaction: bool = True,
) -> Trajectory:
    """March the radial PDE in Kirchhoff form with fixed-step RK4.

    ``initial`` holds theta at ``len(initial)`` uniform nodes on [0, radius].
    The radial Laplacian is the conservative finite-volume form; at r = 0
    it reduces to 2N(u_1 - u_0)/dr^2. Robin and radiation conditions enter
    as the flux through r = radius of the last half cell. ``reaction=False``
    switches the source off (diagnostic mode).

    The step must satisfy ``dt <= 0.25 dr^2 / max D``; ``dt=None`` takes
    the largest such step that divides ``t_end`` into a whole number of
    steps (rounded to a multiple of ``n_samples - 1``).
    """
    theta0 = np.asarray(initial, dtype=float)
    n = theta0.size
    if n < 5:
        raise ValueError("need at least 5 radial nodes")
    if dim not in (1, 2, 3):
        raise ValueError("dimension must be 1, 2 or 3")
    if np.any(theta0 < 0) or np.any(theta0 > profile.theta_max):
        raise AboveRange(f"initial data must lie in [0, {profile.theta_max}]")
    r = np.linspace(0.0, radius, n)
    dr = r[1] - r[0]
    dt_max = stable_dt(dr, profile)
    intervals = max(n_samples - 1, 1)
    if dt is None:
        n_steps = intervals * math.ceil(t_end / (dt_max * intervals))
        dt = t_end / n_steps
    else:
        if dt > dt_max * (1 + 1e-12):
            raise StabilityViolation(f"dt = {dt:.6g} exceeds the bound 0.25 dr^2/max D = {dt_max:.6g}")
        n_steps = round(t_end / dt)
        if n_steps % intervals or not math.isclose(n_steps * dt, t_end, rel_tol=1e-9):
            raise ValueError("t_end must be a multiple of dt * (n_samples - 1)")
    u0 = np.asarray(profile.U_at(theta0), dtype=float)
    if bc.kind == "dirichlet":
        u0[-1] = 0.0

    half = r + 0.5 * dr
    a_plus = half ** (dim - 1) / dr
    a_minus = np.maximum(r - 0.5 * dr, 0.0) ** (dim - 1) / dr
    vol = control_volumes(r, dim)
    spl = np.ascontiguousarray(profile._d_spline.c)
    status, reached, samples = kern.run_rk4(
        u0, dim, dr, vol, a_plus, a_minus, radius ** (dim - 1), bc.code, float(bc.coef),
        reaction, _KIND_CODE[model.kind], model.s, model.theta1 if model.theta1 is not None else 0.0,
        np.ascontiguousarray(profile.theta), np.ascontiguousarray(profile.U),
        np.ascontiguousarray(profile.D), spl, dt, n_steps, n_steps // intervals, 1e-13,
    )
    if status == kern.NEGATIVE:
        raise PositivityViolation(f"negative Kirchhoff value at step {reached} (t = {reached * dt:.6g})")
    if status == kern.ABOVE:
        raise AboveRange(f"solution left the tabulated range at step {reached} (t = {reached * dt:.6g})")
    samples = np.maximum(samples, 0.0)
    theta = profile.invert(samples)
    times = np.arange(samples.shape[0]) * (n_steps // intervals) * dt
    return Trajectory(times, r, samples, theta, dt, dim, bc, model, profile,
                      {"n_steps": n_steps, "dt_bound": dt_max})


@dataclass
class CompareReport:
    times: np.ndarray
    linf: np.ndarray
    l2: np.ndarray

    @property
    def max_linf(self) -> float:
        return float(np.max(self.linf))


def compare(trajectory: Trajectory, reference) -> CompareReport:
    """Error norms of theta_sim - theta_ref at each sampled time.

    ``reference`` is an :class:`ExactSolution` (evaluated on the trajectory
    grid, which must fit inside [0, r1]) or another :class:`Trajectory` on
    the identical grid and times. L2 is the volume-weighted RMS.
    """
    r = trajectory.r
    if isinstance(reference, Trajectory):
        if not (np.array_equal(reference.r, r) and np.array_equal(reference.times, trajectory.times)):
            raise GridMismatch("trajectories are sampled on different grids or times")
        ref = reference.theta
    else:
        if r[-1] > reference.r1 * (1 + 1e-12):
            raise GridMismatch(f"trajectory radius {r[-1]} exceeds the solution domain {reference.r1}")
        if reference.mode.dim != trajectory.dim:
            raise GridMismatch("dimension of trajectory and exact solution differ")
        ref = np.array([reference.theta(r, t) for t in trajectory.times])
    err = trajectory.theta - ref
    vol = control_volumes(r, trajectory.dim)
    linf = np.max(np.abs(err), axis=1)
    l2 = np.sqrt((err * err) @ vol / vol.sum())
    return CompareReport(trajectory.times.copy(), linf, l2)


# ------------------------------------------------------------------ check suite


@dataclass
class Check:
    name: str
    value: float | None
    bound: float | None
    passed: bool
    note: str = ""

    def to_dict(self) -> dict:
        return asdict(self)


def _check(name, value, bound, note=""):
    return Check(name, float(value), float(bound), bool(value <= bound), note)


def iterate_checks(profile: DiffusivityProfile, tol: float = 1e-6) -> list[Check]:
    """Closed-form iterates against the discrete fixed-point map.

    Level 1 is compared with one map application to the constant start;
    level 2 with one application to the tabulated level-1 iterate. A level
    outside its closed-form regime is reported as skipped (passed).
    """
    model, params, th = profile.model, profile.params, profile.theta
    start = constant_profile(model, params, start_value(model, params), profile.theta_max, th.size)
    out = []
    d1 = closed_form_iterate(model, params, 1, th)
    err1 = np.max(np.abs(picard_iterate(model, params, start).D - d1))
    out.append(_check("closed_form_level1", err1, tol))
    try:
        d2 = closed_form_iterate(model, params, 2, th)
    except WrongRegime as exc:
        out.append(Check("closed_form_level2", None, tol, True, f"skipped: {exc}"))
        return out
    first = tabulated_profile(model, params, th, d1, "closed_form_1")
    err2 = np.max(np.abs(picard_iterate(model, params, first).D - d2))
    out.append(_check("closed_form_level2", err2, tol))
    return out


def invariant_checks(sol: ExactSolution, tol: float = 1e-10) -> list[Check]:
    """Every embedded invariant for an assembled solution.

    Relation residual <= 1e-8 s, analytic PDE residual <= 1e-10 scale,
    fourth-order FD residual order >= 3.5, fixed-point change
    <= 10 tol max D, closed-form iterates within 1e-6.
    """
    profile, s = sol.profile, sol.model.s
    checks = [_check("relation_residual", relation_residual(profile).max_abs, 1e-8 * s)]
    analytic = pde_residual(sol)
    checks.append(_check("pde_residual_analytic", analytic.max_abs, 1e-10 * analytic.scale))
    orders = [rep.order_estimate for rep in fd_convergence(sol)[1:]]
    checks.append(Check("pde_residual_fd_order", min(orders), 3.5, min(orders) >= 3.5,
                        "orders " + ", ".join(f"{o:.4f}" for o in orders)))
    change = np.max(np.abs(picard_iterate(sol.model, sol.params, profile).D - profile.D))
    checks.append(_check("fixed_point_change", change, 10 * tol * np.max(profile.D)))
    checks.extend(iterate_checks(profile))
    return checks
