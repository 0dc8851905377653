"""Distance of traveling-wave profiles to the limiting shock as epsilon, delta -> 0."""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.integrate import trapezoid

from .errors import DispShockError, DomainError, FrictionError
from .heteroclinic import WaveProfile, shoot_heteroclinic, to_physical
from .models import Boussinesq, Elasticity, QHD, ShockData, build_profile_problem

SUPPORT_LEVEL = 0.01  # fraction of the jump that counts as "still oscillating"
WINDOW_LEVEL = 1e-10  # deviation below which a profile counts as settled for the auto window


@dataclass(frozen=True)
class ShockReference:
    """Step function in theta with the jump at 0."""

    left: dict
    right: dict
    s: float
    front: float = 0.0

    def evaluate(self, name: str, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        return np.where(theta < self.front, self.left[name], self.right[name])


@dataclass(frozen=True)
class ConvergenceRecord:
    epsilon: float
    delta: float
    c: float
    l1_distance: float
    support_width: float
    window: tuple
    overdamped: bool = False
    error: Optional[str] = None


def primary_fields(model) -> tuple:
    """The two physical fields compared against the shock."""
    if isinstance(model, Elasticity):
        return ("u", "v")
    if isinstance(model, QHD):
        return ("rho", "u")
    if isinstance(model, Boussinesq):
        return ("eta", "u")
    raise TypeError(f"unknown model {model!r}")


def shock_reference(model, shock: ShockData) -> ShockReference:
    """Left/right physical states in the theta convention used by the profiles."""
    if isinstance(model, Elasticity):
        minus = {"u": shock.u_minus, "v": shock.v_minus}
        plus = {"u": shock.u_plus, "v": shock.v_plus}
    elif isinstance(model, QHD):
        minus = {"rho": shock.u_minus, "u": shock.v_minus, "j": shock.u_minus * shock.v_minus}
        plus = {"rho": shock.u_plus, "u": shock.v_plus, "j": shock.u_plus * shock.v_plus}
    elif isinstance(model, Boussinesq):
        minus = {"eta": 0.0, "u": shock.u_minus}
        plus = {"eta": shock.v_plus, "u": shock.u_plus}
        # the undular bore trails behind the front: theta runs against tau
        return ShockReference(left=plus, right=minus, s=shock.s)
    else:
        raise TypeError(f"unknown model {model!r}")
    return ShockReference(left=minus, right=plus, s=shock.s)


def front_position(profile: WaveProfile) -> float:
    """theta of the mid-value crossing on the upstroke into the first extremum."""
    pr = profile.problem
    mid = 0.5 * (pr.u_minus + pr.u_plus)
    tr = profile.trajectory
    d = tr.u - mid
    idx = np.nonzero(np.sign(d[:-1]) != np.sign(d[1:]))[0]
    if idx.size == 0:
        raise DomainError("profile never crosses the mid value")
    before = idx[tr.tau[idx] <= 0.0]
    i = int(before[-1]) if before.size else int(idx[0])
    t0, t1 = float(tr.tau[i]), float(tr.tau[i + 1])
    s0 = math.copysign(1.0, d[i])
    for _ in range(80):
        tm = 0.5 * (t0 + t1)
        vm = float(tr.evaluate(tm)[0][0]) + tr.u_plus - mid
        if math.copysign(1.0, vm) == s0:
            t0 = tm
        else:
            t1 = tm
    return 0.5 * (t0 + t1) * pr.theta_scale


def _grid(profile: WaveProfile, shift: float, window, n_sub: int = 4) -> np.ndarray:
    theta, _ = profile.dense(n_sub)
    theta = theta - shift
    lo, hi = window
    inside = theta[(theta > lo) & (theta < hi)]
    return np.unique(np.concatenate([inside, [lo, 0.0, hi]]))


def l1_distance(profile: WaveProfile, reference: ShockReference, window, shift: Optional[float] = None,
                names: Optional[Sequence[str]] = None) -> float:
    """Sum over fields of int_window |field - step| dtheta, trapezoid split at the jump."""
    if shift is None:
        shift = front_position(profile)
    names = tuple(names) if names is not None else primary_fields(profile.problem.model)
    grid = _grid(profile, shift, window)
    vals = profile.evaluate(grid + shift)
    total = 0.0
    left = grid <= 0.0
    right = grid >= 0.0
    for name in names:
        f = vals[name]
        # one-sided limits at theta = 0 so the step never straddles a trapezoid
        dl = np.abs(f[left] - reference.left[name])
        dr = np.abs(f[right] - reference.right[name])
        total += trapezoid(dl, grid[left]) + trapezoid(dr, grid[right])
    return float(total)


def support_width(profile: WaveProfile, shift: Optional[float] = None, level: float = SUPPORT_LEVEL) -> float:
    """theta-length, on the tail side of the front, where |u - u_plus| > level * jump."""
    if shift is None:
        shift = front_position(profile)
    pr = profile.problem
    theta, u = profile.dense(4)
    theta = theta - shift
    big = (np.abs(u - pr.u_plus) > level * pr.span) & (theta * np.sign(pr.theta_scale) > 0)
    # a grid interval counts when both ends are above the level
    both = big[:-1] & big[1:]
    return float(np.sum(np.diff(theta)[both]))


def settled_window(profile: WaveProfile, shift: Optional[float] = None,
                   level: float = WINDOW_LEVEL) -> tuple[float, float]:
    """Smallest theta interval outside which the profile is within level * jump of its states."""
    if shift is None:
        shift = front_position(profile)
    pr = profile.problem
    theta, u = profile.dense(1)
    theta = theta - shift
    off = np.minimum(np.abs(u - pr.u_plus), np.abs(u - pr.u_minus)) > level * pr.span
    if not np.any(off):
        return (-1e-12, 1e-12)
    return (float(theta[off].min()), float(theta[off].max()))


def _problem(model, shock, epsilon, p):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", FrictionError)
        return build_profile_problem(model, shock, epsilon, epsilon**p)


def _solve_task(args):
    """Shoot one profile; returns only picklable data so it can run in a worker process."""
    model, shock, epsilon, p, offset_scale, rtol = args
    try:
        prof = shoot_heteroclinic(_problem(model, shock, epsilon, p), offset_scale=offset_scale, rtol=rtol)
    except DispShockError as exc:
        return exc
    return prof.trajectory, prof.h, prof.lambda_plus


def _rebuild(model, shock, epsilon, p, solved):
    problem = _problem(model, shock, epsilon, p)
    traj, h, lam = solved
    return problem, to_physical(problem, model, traj, epsilon, problem.delta, lambda_plus=lam, h=h)


def sweep(model, shock: ShockData, eps_list, p: float, window=None, offset_scale: float = 1e-7,
          rtol: float = 1e-10, workers: int = 1) -> list[ConvergenceRecord]:
    """One record per epsilon (descending) with delta = epsilon**p.

    ``window=None`` picks one fixed window covering every profile of the sweep
    (where it deviates from its end states by more than 1e-10 of the jump), so
    the distances are comparable and the whole oscillatory tail is counted.
    Failures are recorded per epsilon instead of aborting the sweep.
    """
    if not p > 1.0:
        raise DomainError("the exponent p must exceed 1 so that delta = o(epsilon)")
    eps = sorted({float(e) for e in eps_list}, reverse=True)
    if not eps or eps[-1] <= 0:
        raise DomainError("epsilon values must be positive")
    tasks = [(model, shock, e, p, offset_scale, rtol) for e in eps]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_solve_task, tasks))
    else:
        results = [_solve_task(t) for t in tasks]

    results = [res if isinstance(res, Exception) else _rebuild(model, shock, e, p, res)
               for e, res in zip(eps, results)]
    shifts = {}
    for e, res in zip(eps, results):
        if not isinstance(res, Exception):
            shifts[e] = front_position(res[1])
    if window is None:
        spans = [settled_window(res[1], shifts[e]) for e, res in zip(eps, results) if e in shifts]
        window = (min(s[0] for s in spans), max(s[1] for s in spans)) if spans else (-1.0, 1.0)
    window = (float(window[0]), float(window[1]))
    ref = shock_reference(model, shock)

    records = []
    for e, res in zip(eps, results):
        delta = e**p
        if isinstance(res, Exception):
            records.append(ConvergenceRecord(epsilon=e, delta=delta, c=math.nan, l1_distance=math.nan,
                                             support_width=math.nan, window=window,
                                             error=f"{type(res).__name__}: {res}"))
            continue
        problem, profile = res
        records.append(ConvergenceRecord(
            epsilon=e, delta=delta, c=problem.c,
            l1_distance=l1_distance(profile, ref, window, shifts[e]),
            support_width=support_width(profile, shifts[e]),
            window=window, overdamped=problem.overdamped))
    return records


def width_slope(records: Sequence[ConvergenceRecord]) -> float:
    """Least-squares slope of log(support_width) against log(delta / epsilon)."""
    ok = [r for r in records if r.error is None and r.support_width > 0]
    if len(ok) < 2:
        raise DomainError("need two successful records for a slope")
    x = np.log([r.delta / r.epsilon for r in ok])
    y = np.log([r.support_width for r in ok])
    return float(np.polyfit(x, y, 1)[0])
