"""Adaptive integration of the planar system u' = w, w' = -phi(u) - gamma_f c w.

The state is carried as (v, w) with v = u - u_plus so relative error control
and the energy stay meaningful deep in the decaying tail. Dormand-Prince 5(4)
with a PI step controller; each accepted step keeps the data for a quintic
Hermite interpolant (values, first and second derivatives at both ends),
which serves event location, dense evaluation and the energy audit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from .errors import BlowupError, DomainError, StepUnderflow
from .models import ProfileProblem

# Dormand-Prince 5(4) tableau
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B = _A[6] + (0.0,)
_E = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)

_SAFETY = 0.9
_BETA1 = 0.7 / 5
_BETA2 = 0.4 / 5

_GL5_X, _GL5_W = np.polynomial.legendre.leggauss(5)
_GL5_T = 0.5 * (_GL5_X + 1.0)
_GL5_W = 0.5 * _GL5_W


@dataclass(frozen=True)
class PhasePoint:
    tau: float
    u: float
    w: float
    E: float


@dataclass(frozen=True)
class ExtremumEvent:
    kind: str  # "max" or "min" of u
    tau: float
    u: float
    E: float
    index: int
    v: float = 0.0  # u - u_plus, kept at full relative precision


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Accepted-step nodes of one integration plus interpolation data."""

    tau: np.ndarray
    v: np.ndarray
    w: np.ndarray
    fw: np.ndarray
    gw: np.ndarray
    E: np.ndarray
    u_plus: float
    events: tuple = ()
    reason: str = "tau_budget"
    rtol: float = 1e-10
    atol: float = 1e-12
    meta: dict = field(default_factory=dict)

    @property
    def u(self) -> np.ndarray:
        return self.u_plus + self.v

    def __len__(self):
        return self.tau.size

    @property
    def samples(self) -> list[PhasePoint]:
        return [PhasePoint(float(t), float(self.u_plus + v), float(w), float(e))
                for t, v, w, e in zip(self.tau, self.v, self.w, self.E)]

    def shifted(self, dtau: float) -> "Trajectory":
        """Translate tau by -dtau (so the point at dtau moves to 0)."""
        events = tuple(replace(ev, tau=ev.tau - dtau) for ev in self.events)
        return replace(self, tau=self.tau - dtau, events=events)

    def evaluate(self, tau) -> tuple[np.ndarray, np.ndarray]:
        """Dense (v, w) inside [tau[0], tau[-1]] by quintic Hermite."""
        t = np.atleast_1d(np.asarray(tau, dtype=float))
        i = np.clip(np.searchsorted(self.tau, t, side="right") - 1, 0, self.tau.size - 2)
        h = self.tau[i + 1] - self.tau[i]
        s = (t - self.tau[i]) / h
        v = _hermite(s, h, self.v[i], self.w[i], self.fw[i], self.v[i + 1], self.w[i + 1], self.fw[i + 1])
        w = _hermite(s, h, self.w[i], self.fw[i], self.gw[i], self.w[i + 1], self.fw[i + 1], self.gw[i + 1])
        return v, w


def _hermite(s, h, y0, d0, dd0, y1, d1, dd1):
    s2 = s * s
    s3 = s2 * s
    s4 = s3 * s
    s5 = s4 * s
    h00 = 1 - 10 * s3 + 15 * s4 - 6 * s5
    h10 = s - 6 * s3 + 8 * s4 - 3 * s5
    h20 = 0.5 * s2 - 1.5 * s3 + 1.5 * s4 - 0.5 * s5
    h01 = 10 * s3 - 15 * s4 + 6 * s5
    h11 = -4 * s3 + 7 * s4 - 3 * s5
    h21 = 0.5 * s3 - s4 + 0.5 * s5
    return (h00 * y0 + h10 * h * d0 + h20 * h * h * dd0
            + h01 * y1 + h11 * h * d1 + h21 * h * h * dd1)


def default_tau_budget(problem: ProfileProblem) -> float:
    alpha = float(problem.dphi(problem.u_plus))
    c = problem.gamma_f * problem.c
    return 200.0 / c + 50.0 / math.sqrt(alpha)


def integrate_adaptive(problem: ProfileProblem, start: PhasePoint, tau_max: float,
                       rtol: float = 1e-10, atol: Optional[float] = None,
                       E_stop: Optional[float] = None, fixed_step: Optional[float] = None,
                       max_step: Optional[float] = None, check_region: bool = True) -> Trajectory:
    """Integrate from ``start`` until tau_max, energy below E_stop, or blowup.

    ``E_stop`` defaults to the problem's stop level when there is friction and
    is disabled for c = 0. ``fixed_step`` switches adaptivity off (used for
    order checks).
    """
    if not (1e-13 <= rtol <= 1e-6):
        raise DomainError("rtol must lie in [1e-13, 1e-6]")
    if atol is None:
        atol = 1e-12 * max(problem.span, 1e-300)
    k = problem.gamma_f * problem.c
    if E_stop is None:
        E_stop = problem.E_stop if k > 0 else -math.inf
    phi_rel, dphi_rel, Phi_rel = problem.phi_rel, problem.dphi_rel, problem.Phi_rel
    u_plus = problem.u_plus

    v = start.u - u_plus
    w = start.w
    E0 = float(Phi_rel(v)) + 0.5 * w * w
    if check_region and E0 > problem.E_max + 1e-6 * max(abs(problem.E_max), 1.0):
        raise DomainError(f"start energy {E0:.6g} exceeds E_max {problem.E_max:.6g}")
    guard = 10.0 * (abs(problem.u_s) + abs(problem.u_minus) + 1.0)

    def f(v, w):
        return w, -float(phi_rel(v)) - k * w

    tau = float(start.tau)
    span = tau_max - tau
    if span <= 0:
        raise DomainError("tau_max must exceed the start tau")
    h_min = 1e-14 * span

    taus, vs, ws, fws, gws, Es = [tau], [v], [w], [], [], [E0]
    f0 = f(v, w)
    fws.append(f0[1])
    gws.append(-float(dphi_rel(v)) * w - k * f0[1])

    if fixed_step is not None:
        h = float(fixed_step)
    else:
        h = _initial_step(f, v, w, f0, rtol, atol, span)
    if max_step is not None:
        h = min(h, max_step)
    err_prev = 1.0
    reason = "tau_budget"
    n_rejected = 0

    while tau < tau_max:
        if tau + h > tau_max:
            h = tau_max - tau
        K = [f0]
        for j in range(1, 7):
            a = _A[j]
            dv = sum(a[i] * K[i][0] for i in range(j))
            dw = sum(a[i] * K[i][1] for i in range(j))
            K.append(f(v + h * dv, w + h * dw))
        v_new = v + h * sum(_B[i] * K[i][0] for i in range(7))
        w_new = w + h * sum(_B[i] * K[i][1] for i in range(7))
        if fixed_step is None:
            ev = h * sum(_E[i] * K[i][0] for i in range(7))
            ew = h * sum(_E[i] * K[i][1] for i in range(7))
            sv = atol + rtol * max(abs(v), abs(v_new))
            sw = atol + rtol * max(abs(w), abs(w_new))
            err = math.sqrt(0.5 * ((ev / sv) ** 2 + (ew / sw) ** 2))
            if not math.isfinite(err):
                err = 1e10
            if err > 1.0:
                n_rejected += 1
                h *= max(0.2, _SAFETY * err ** (-0.2))
                if h < h_min:
                    raise StepUnderflow(f"step {h:.3g} below {h_min:.3g} at tau={tau:.6g}")
                continue
        tau_new = tau + h
        f1 = K[6]
        v, w, f0 = v_new, w_new, f1
        tau = tau_new
        E = float(Phi_rel(v)) + 0.5 * w * w
        taus.append(tau)
        vs.append(v)
        ws.append(w)
        fws.append(f1[1])
        gws.append(-float(dphi_rel(v)) * w - k * f1[1])
        Es.append(E)
        if abs(u_plus + v) + abs(w) > guard or not math.isfinite(E):
            raise BlowupError(f"trajectory left the guard box at tau={tau:.6g}")
        if E < E_stop:
            reason = "converged"
            break
        if fixed_step is None:
            err = max(err, 1e-10)
            fac = _SAFETY * err ** (-_BETA1) * err_prev ** _BETA2
            h *= min(5.0, max(0.2, fac))
            err_prev = err
            if max_step is not None:
                h = min(h, max_step)

    traj = Trajectory(tau=np.array(taus), v=np.array(vs), w=np.array(ws), fw=np.array(fws),
                      gw=np.array(gws), E=np.array(Es), u_plus=u_plus, reason=reason,
                      rtol=rtol, atol=atol, meta={"rejected": n_rejected, "c": problem.c,
                                                   "gamma_f": problem.gamma_f})
    return replace(traj, events=tuple(locate_events(traj, problem)))


def _initial_step(f, v, w, f0, rtol, atol, span):
    sv = atol + rtol * abs(v)
    sw = atol + rtol * abs(w)
    d0 = math.hypot(v / sv, w / sw) / math.sqrt(2)
    d1 = math.hypot(f0[0] / sv, f0[1] / sw) / math.sqrt(2)
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    h0 = min(h0, 0.1 * span)
    f1 = f(v + h0 * f0[0], w + h0 * f0[1])
    d2 = math.hypot((f1[0] - f0[0]) / sv, (f1[1] - f0[1]) / sw) / math.sqrt(2) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.2
    return min(100 * h0, h1, 0.1 * span)


def locate_events(traj: Trajectory, problem: ProfileProblem) -> list[ExtremumEvent]:
    """Zeros of w on the dense output, classified as maxima or minima of u."""
    w = traj.w
    events = []
    phi_rel = problem.phi_rel
    sgn = np.sign(w)
    for i in range(w.size - 1):
        a, b = sgn[i], sgn[i + 1]
        if a == 0 or a == b:
            continue
        t0, t1 = traj.tau[i], traj.tau[i + 1]
        if b == 0:
            tz = t1
        else:
            tz = brentq(lambda t: float(traj.evaluate(t)[1][0]), t0, t1,
                        xtol=1e-14 * max(1.0, abs(t1)), rtol=1e-15)
        vz, wz = traj.evaluate(tz)
        vz = float(vz[0])
        ph = float(phi_rel(vz))
        if abs(ph) < traj.atol:
            continue  # tangency at an equilibrium
        if b == 0:
            kind = "max" if ph > 0 else "min"  # w' = -phi decides the direction
        else:
            kind = "max" if a > 0 else "min"
        E = float(problem.Phi_rel(vz)) + 0.5 * float(wz[0]) ** 2
        events.append(ExtremumEvent(kind, float(tz), problem.u_plus + vz, E, len(events), vz))
    return events


def energy_audit(problem: ProfileProblem, traj: Trajectory) -> float:
    """Worst per-step mismatch of dE + gamma_f c int w^2 dtau, relative to the energy scale.

    The integral uses 5-point Gauss-Legendre on the quintic Hermite w(tau).
    """
    if len(traj) < 2:
        return 0.0
    k = problem.gamma_f * problem.c
    t0, t1 = traj.tau[:-1], traj.tau[1:]
    h = t1 - t0
    acc = np.zeros_like(h)
    for node, wt in zip(_GL5_T, _GL5_W):
        s = np.full_like(h, node)
        wq = _hermite(s, h, traj.w[:-1], traj.fw[:-1], traj.gw[:-1], traj.w[1:], traj.fw[1:], traj.gw[1:])
        acc += wt * wq * wq
    dissipated = k * h * acc
    dE = np.diff(traj.E)
    scale = max(float(np.max(np.abs(traj.E))), traj.atol)
    return float(np.max(np.abs(dE + dissipated)) / scale)
