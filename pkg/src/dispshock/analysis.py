"""Oscillation structure of a profile and the Hamiltonian period T(E)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from .errors import DomainError, InsufficientDataError, TurningPointError
from .heteroclinic import WaveProfile
from .integrate import PhasePoint, integrate_adaptive
from .models import ProfileProblem

MIN_TAIL_EXTREMA = 6

_GL_X, _GL_W = np.polynomial.legendre.leggauss(20)
_GL_T = 0.5 * (_GL_X + 1.0)
_GL_W = 0.5 * _GL_W


@dataclass(frozen=True)
class CycleRecord:
    n: int
    tau_min: float  # y_n
    tau_max: float  # x_n, the far-side extremum preceding y_n
    E_yn: float
    dE: float  # E(y_{n+1}) - E(y_n)
    spacing: float  # y_{n+1} - y_n


@dataclass(frozen=True)
class OscillationReport:
    cycles: list
    L_high: float
    L_low: float
    decay_rate: float
    tail_spacing: float
    c: float
    gamma_f: float = 1.0
    n_tail_extrema: int = 0
    low_confidence: bool = False
    spiral: bool = True
    tau_Em: float = math.nan
    tau_stop: float = math.nan
    meta: dict = field(default_factory=dict)

    @property
    def length(self) -> float:
        return self.L_high + self.L_low


def _energy_crossing(profile: WaveProfile, level: float) -> float:
    """First tau >= 0 at which the energy drops below ``level`` (dense output)."""
    tr = profile.trajectory
    prob = profile.problem
    idx = np.nonzero((tr.E < level) & (tr.tau >= 0.0))[0]
    if idx.size == 0:
        return float(tr.tau[-1])
    i = int(idx[0])
    if i == 0 or tr.tau[i - 1] < 0.0:
        return float(max(tr.tau[i - 1] if i > 0 else tr.tau[0], 0.0))

    def excess(t):
        v, w = tr.evaluate(t)
        return float(prob.Phi_rel(v[0])) + 0.5 * float(w[0]) ** 2 - level

    lo, hi = float(tr.tau[i - 1]), float(tr.tau[i])
    if excess(lo) <= 0.0:
        return lo
    return float(brentq(excess, lo, hi, xtol=1e-12 * max(1.0, abs(hi))))


def _fit_rate(t, y):
    A = np.vstack([t, np.ones_like(t)]).T
    slope, _ = np.linalg.lstsq(A, y, rcond=None)[0]
    return -float(slope)


def oscillation_report(problem: ProfileProblem, profile: WaveProfile) -> OscillationReport:
    """Per-cycle energies, region lengths and tail fits of a normalized profile."""
    tr = profile.trajectory
    o = problem.orientation
    near_kind = "min" if o > 0 else "max"  # extrema on the u_minus side
    events = [e for e in tr.events if e.tau >= -1e-9 * max(1.0, abs(tr.tau[-1]))]
    k = problem.gamma_f * problem.c
    spiral = bool(k * k < 4.0 * float(problem.dphi(problem.u_plus)))

    ys = [e for e in events if e.kind == near_kind]
    cycles = []
    for n in range(len(ys) - 1):
        a, b = ys[n], ys[n + 1]
        prev = [e for e in events if e.kind != near_kind and e.tau < a.tau]
        x_tau = prev[-1].tau if prev else math.nan
        cycles.append(CycleRecord(n=n, tau_min=a.tau, tau_max=x_tau, E_yn=a.E,
                                  dE=b.E - a.E, spacing=b.tau - a.tau))

    tau0 = 0.0
    tau_Em = _energy_crossing(profile, problem.E_m)
    tau_stop = float(tr.tau[-1])
    L_high = max(tau_Em - tau0, 0.0)
    L_low = max(tau_stop - tau_Em, 0.0)

    tail = [e for e in events if e.E < problem.E_m and e.tau >= tau_Em]
    low_conf = False
    if spiral and len(tail) >= 2:
        t = np.array([e.tau for e in tail])
        y = np.log(np.abs([e.v for e in tail]))
        if len(tail) >= MIN_TAIL_EXTREMA:
            rate = _fit_rate(t, y)
        else:
            rate = -(y[-1] - y[-2]) / (t[-1] - t[-2])
            low_conf = True
        spacing = float((t[-1] - t[0]) / (len(t) - 1))
    else:
        # node regime (or too few extrema): fit the sampled tail itself
        sel = (tr.tau >= tau_Em) & (tr.E < 1e-6 * problem.E_max) & (np.abs(tr.v) > 0)
        if np.count_nonzero(sel) >= 2:
            rate = _fit_rate(tr.tau[sel], np.log(np.abs(tr.v[sel])))
        else:
            rate = math.nan
        low_conf = spiral
        spacing = math.nan
    return OscillationReport(cycles=cycles, L_high=float(L_high), L_low=float(L_low),
                             decay_rate=float(rate), tail_spacing=spacing, c=problem.c,
                             gamma_f=problem.gamma_f, n_tail_extrema=len(tail),
                             low_confidence=low_conf, spiral=spiral, tau_Em=float(tau_Em),
                             tau_stop=tau_stop)


def turning_points(problem: ProfileProblem, E: float) -> tuple[float, float]:
    """Offsets (v1, v2) from u_plus with Phi = E on either side of u_plus.

    v1 lies towards u_minus and v2 towards u_s.
    """
    if not (0.0 < E < problem.E_max):
        raise DomainError(f"E = {E!r} outside (0, E_max)")
    f = lambda v: float(problem.Phi_rel(v)) - E  # noqa: E731
    near = problem.u_minus - problem.u_plus
    far = problem.u_s - problem.u_plus
    try:
        v1 = brentq(f, near, 0.0, xtol=1e-16, rtol=4 * np.finfo(float).eps, maxiter=400)
        v2 = brentq(f, 0.0, far, xtol=1e-16, rtol=4 * np.finfo(float).eps, maxiter=400)
    except (ValueError, RuntimeError) as exc:
        raise TurningPointError(f"turning points for E = {E!r}: {exc}") from exc
    return float(v1), float(v2)


def _gap(problem: ProfileProblem, E: float, v: float, v_turn: float) -> float:
    """E - Phi(v) written as the residual at the turning point plus int_v^v_turn phi.

    The short Gauss-Legendre segment keeps full relative accuracy where E and
    Phi nearly cancel.
    """
    resid = E - float(problem.Phi_rel(v_turn))
    x = v + (v_turn - v) * _GL_T
    return resid + (v_turn - v) * float(problem.phi_rel(x) @ _GL_W)


def period(problem: ProfileProblem, E: float, rtol: float = 1e-8) -> float:
    """T(E) = 2 int du / sqrt(2 (E - Phi)) between the turning points.

    u = mid + half sin(t) removes the inverse square-root endpoint singularities.
    """
    v1, v2 = turning_points(problem, E)
    lo, hi = min(v1, v2), max(v1, v2)
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    slope = {lo: abs(float(problem.phi_rel(lo))), hi: abs(float(problem.phi_rel(hi)))}

    def integrand(t):
        vt = hi if t > 0 else lo
        gap = _gap(problem, E, mid + half * math.sin(t), vt)
        if gap <= 0.0:
            # within rounding of a turning point: the local linear limit
            return math.sqrt(half / slope[vt])
        return half * math.cos(t) / math.sqrt(2.0 * gap)

    left, _ = quad(integrand, -0.5 * math.pi, 0.0, epsabs=0.0, epsrel=rtol, limit=400)
    right, _ = quad(integrand, 0.0, 0.5 * math.pi, epsabs=0.0, epsrel=rtol, limit=400)
    return 2.0 * (left + right)


def period_ode(problem: ProfileProblem, E: float, rtol: float = 1e-11) -> float:
    """Independent period oracle: time between successive far turning points at c = 0."""
    p0 = problem.with_friction(0.0)
    _, v2 = turning_points(p0, E)
    T_guess = period(p0, E, rtol=1e-6)
    start = PhasePoint(0.0, p0.u_plus + v2, 0.0, E)
    tr = integrate_adaptive(p0, start, 1.5 * T_guess, rtol=rtol)
    far_kind = "max" if p0.orientation > 0 else "min"
    hits = [e.tau for e in tr.events if e.kind == far_kind]
    if not hits:
        raise TurningPointError("closed orbit did not return within 1.5 T")
    return float(hits[0])


def fit_length_scaling(reports, min_decades: float = 0.9) -> tuple[float, float, float]:
    """Least-squares slope of log(L_high + L_low) against log c.

    Returns (slope, intercept, r2). ``min_decades`` is the minimum log10 span
    of the friction values.
    """
    reports = list(reports)
    if len(reports) < 4:
        raise InsufficientDataError("need at least 4 reports")
    c = np.array([r.c for r in reports], dtype=float)
    L = np.array([r.L_high + r.L_low for r in reports], dtype=float)
    if np.any(c <= 0) or np.any(L <= 0):
        raise InsufficientDataError("friction and lengths must be positive")
    if math.log10(c.max() / c.min()) < min_decades:
        raise InsufficientDataError(f"friction values span less than {min_decades} decades")
    x, y = np.log(c), np.log(L)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return float(slope), float(intercept), r2
