"""Shooting for the heteroclinic orbit and mapping it back to physical fields.

The orbit leaves the saddle (u_minus, 0) along its one-dimensional unstable
manifold, so one forward integration from a point on the linearized manifold
suffices. Everything before the start point is reconstructed from the
linearization u - u_minus = h exp(lambda_plus (tau - tau_start)).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DomainError, HypothesisError, NonconvergenceError
from .integrate import PhasePoint, Trajectory, default_tau_budget, integrate_adaptive
from .models import QHD, Boussinesq, Elasticity, ProfileProblem

# decades of |u - u_minus| covered by the analytic backward extension
_BACK_DECADES = 4
_BACK_POINTS = 41


@dataclass(frozen=True)
class SaddleData:
    lambda_plus: float
    lambda_minus: float
    Lambda_pair: tuple
    spiral: bool
    unstable_direction: tuple


def saddle_analysis(problem: ProfileProblem) -> SaddleData:
    """Linearization at both equilibria of u'' + k u' + phi(u) = 0, k = gamma_f c."""
    a_minus = float(problem.dphi(problem.u_minus))
    a_plus = float(problem.dphi(problem.u_plus))
    if not a_minus < 0:
        raise HypothesisError(f"phi'(u_minus) = {a_minus:.6g} is not negative: no saddle")
    if not a_plus > 0:
        raise HypothesisError(f"phi'(u_plus) = {a_plus:.6g} is not positive")
    k = problem.gamma_f * problem.c
    root = math.sqrt(k * k - 4.0 * a_minus)
    lam_p = 0.5 * (-k + root)
    lam_m = 0.5 * (-k - root)
    disc = cmath.sqrt(k * k - 4.0 * a_plus)
    pair = (0.5 * (-k + disc), 0.5 * (-k - disc))
    if k * k >= 4.0 * a_plus:
        pair = tuple(complex(z.real, 0.0) for z in pair)
    return SaddleData(lambda_plus=lam_p, lambda_minus=lam_m, Lambda_pair=pair,
                      spiral=bool(k * k < 4.0 * a_plus), unstable_direction=(1.0, lam_p))


@dataclass(frozen=True, eq=False)
class WaveProfile:
    """Normalized heteroclinic orbit plus its physical fields.

    ``trajectory`` is shifted so the first extremum (the turning point near
    u_s) sits at tau = 0; when there is none, the crossing of the mid value
    (u_minus + u_plus)/2 is used. ``theta`` is the physical coordinate of every
    sample, backward extension included, sorted increasingly.
    """

    trajectory: Trajectory
    problem: ProfileProblem
    lambda_plus: float
    h: float
    tau_start: float
    tau: np.ndarray
    u: np.ndarray
    w: np.ndarray
    E: np.ndarray
    theta: np.ndarray
    fields: dict
    left_state: dict
    right_state: dict
    epsilon: Optional[float] = None
    delta: Optional[float] = None
    c: float = 0.0
    s: Optional[float] = None
    meta: dict = field(default_factory=dict)

    @property
    def field_names(self) -> tuple:
        return tuple(self.fields)

    def canonical(self, tau) -> tuple[np.ndarray, np.ndarray]:
        """(u, w) at arbitrary tau, using the analytic extension before the start."""
        t = np.atleast_1d(np.asarray(tau, dtype=float))
        tr = self.trajectory
        u = np.empty_like(t)
        w = np.empty_like(t)
        back = t < self.tau_start
        if np.any(back):
            g = self.h * np.exp(self.lambda_plus * (t[back] - self.tau_start))
            u[back] = self.problem.u_minus + g
            w[back] = self.lambda_plus * g
        mid = (~back) & (t <= tr.tau[-1])
        if np.any(mid):
            v, wm = tr.evaluate(t[mid])
            u[mid] = tr.u_plus + v
            w[mid] = wm
        tail = t > tr.tau[-1]
        u[tail] = tr.u_plus + tr.v[-1]
        w[tail] = 0.0
        return u, w

    def evaluate(self, theta) -> dict:
        """Physical fields at arbitrary theta (constant extrapolation at both ends)."""
        t = np.asarray(theta, dtype=float) / self.problem.theta_scale
        u, _ = self.canonical(t)
        names, vals = physical_fields(self.problem, u)
        return dict(zip(names, vals))

    def dense(self, n_sub: int = 4) -> tuple[np.ndarray, np.ndarray]:
        """(theta, u) on the sample grid refined n_sub times, theta increasing."""
        t = self.tau
        frac = np.arange(n_sub) / n_sub
        fine = (t[:-1, None] + np.diff(t)[:, None] * frac[None, :]).ravel()
        fine = np.append(fine, t[-1])
        u, _ = self.canonical(fine)
        theta = fine * self.problem.theta_scale
        order = np.argsort(theta)
        return theta[order], u[order]


def physical_fields(problem: ProfileProblem, u) -> tuple[tuple, tuple]:
    """Names and values of the physical fields along canonical values u."""
    u = np.asarray(u, dtype=float)
    model, shock = problem.model, problem.shock
    if isinstance(model, Elasticity):
        v = shock.v_minus - shock.s * (u - shock.u_minus)
        return ("u", "v"), (u, v)
    if isinstance(model, QHD):
        rho = np.exp(u)
        vel = shock.s + shock.m / rho
        return ("rho", "u", "j"), (rho, vel, rho * vel)
    if isinstance(model, Boussinesq):
        s = model.s
        if np.any(u >= s * (1.0 - 1e-9)):
            raise DomainError("Boussinesq profile reaches the pole u = s")
        return ("eta", "u"), (u / (u - s), u)
    return ("u",), (u,)


def _states(problem: ProfileProblem) -> tuple[dict, dict]:
    names, at_minus = physical_fields(problem, np.array(problem.u_minus))
    _, at_plus = physical_fields(problem, np.array(problem.u_plus))
    saddle = {n: float(x) for n, x in zip(names, at_minus)}
    spiral = {n: float(x) for n, x in zip(names, at_plus)}
    return (saddle, spiral) if problem.theta_scale > 0 else (spiral, saddle)


def _normalization_shift(traj: Trajectory, problem: ProfileProblem) -> float:
    if traj.events:
        return traj.events[0].tau
    mid = 0.5 * (problem.u_minus - problem.u_plus)
    d = traj.v - mid
    idx = np.nonzero(np.sign(d[:-1]) != np.sign(d[1:]))[0]
    if idx.size == 0:
        return float(traj.tau[0])
    i = int(idx[0])
    t0, t1 = traj.tau[i], traj.tau[i + 1]
    # the interpolant is monotone enough here for a secant refinement
    for _ in range(60):
        tm = 0.5 * (t0 + t1)
        vm = float(traj.evaluate(tm)[0][0]) - mid
        if np.sign(vm) == np.sign(d[i]):
            t0 = tm
        else:
            t1 = tm
    return 0.5 * (t0 + t1)


def shoot_heteroclinic(problem: ProfileProblem, offset_scale: float = 1e-7,
                       rtol: float = 1e-10, tau_budget: Optional[float] = None,
                       require_convergence: bool = True) -> WaveProfile:
    """Integrate along the unstable manifold of the saddle until the energy converges.

    With ``require_convergence=False`` a truncated orbit (for instance only the
    first few cycles, via a short ``tau_budget``) is returned instead of raising.
    """
    if not problem.c > 0:
        raise DomainError("shooting needs positive friction (c = 0 gives a homoclinic loop)")
    sd = saddle_analysis(problem)
    o = problem.orientation
    h = offset_scale * abs(problem.u_s - problem.u_minus) * o
    start = PhasePoint(0.0, problem.u_minus + h, sd.lambda_plus * h, float(problem.Phi(problem.u_minus + h)))
    budget = default_tau_budget(problem) if tau_budget is None else float(tau_budget)
    budget += math.log(abs(problem.span / h)) / sd.lambda_plus
    traj = integrate_adaptive(problem, start, budget, rtol=rtol)
    if require_convergence and traj.reason != "converged":
        raise NonconvergenceError(
            f"tau budget {budget:.6g} exhausted at E = {traj.E[-1]:.3g} > E_stop = {problem.E_stop:.3g}")
    return to_physical(problem, problem.model, traj, problem.epsilon, problem.delta,
                       lambda_plus=sd.lambda_plus, h=h)


def to_physical(problem: ProfileProblem, model, raw: Trajectory, epsilon=None, delta=None,
                lambda_plus: Optional[float] = None, h: Optional[float] = None) -> WaveProfile:
    """Normalize ``raw`` and attach the physical fields on the theta grid."""
    if model is not None and model is not problem.model:
        problem = ProfileProblem(**{**problem.__dict__, "model": model})
    shift = _normalization_shift(raw, problem)
    traj = raw.shifted(shift)
    tau_start = float(traj.tau[0])
    if lambda_plus is None:
        lambda_plus = saddle_analysis(problem).lambda_plus
    if h is None:
        h = float(traj.u[0] - problem.u_minus)

    parts_t, parts_u, parts_w = [], [], []
    if h != 0.0:
        g = h * np.logspace(-_BACK_DECADES, 0, _BACK_POINTS)[:-1]
        tb = tau_start + np.log(g / h) / lambda_plus
        parts_t.append(tb)
        parts_u.append(problem.u_minus + g)
        parts_w.append(lambda_plus * g)
    parts_t.append(traj.tau)
    parts_u.append(traj.u)
    parts_w.append(traj.w)
    tau = np.concatenate(parts_t)
    u = np.concatenate(parts_u)
    w = np.concatenate(parts_w)
    E = 0.5 * w * w + problem.Phi_rel(u - problem.u_plus)
    theta = tau * problem.theta_scale
    order = np.argsort(theta, kind="stable")
    tau, u, w, E, theta = tau[order], u[order], w[order], E[order], theta[order]
    names, vals = physical_fields(problem, u)
    left, right = _states(problem)
    s = problem.shock.s if problem.shock is not None else None
    return WaveProfile(trajectory=traj, problem=problem, lambda_plus=float(lambda_plus), h=float(h),
                       tau_start=tau_start, tau=tau, u=u, w=w, E=E, theta=theta,
                       fields=dict(zip(names, vals)), left_state=left, right_state=right,
                       epsilon=epsilon, delta=delta, c=problem.c, s=s,
                       meta={"shift": shift, "reason": raw.reason})
