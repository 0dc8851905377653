"""Model families, shock data and the reduction to a scalar profile problem.

Every traveling-wave problem handled by the package is reduced to

    u'' + gamma_f * c * u' + phi(u) = 0,   u(-inf) = u_minus,  u(+inf) = u_plus,

with u_minus a saddle and u_plus a spiral (or node). ``ProfileProblem`` holds
the evaluators for phi, phi' and the potential Phi (Phi' = phi, Phi(u_plus) = 0)
together with the energy landmarks used by the rest of the package.

Evaluators come in two flavours: ``phi(u)`` in the natural variable and
``phi_rel(v)`` in the offset v = u - u_plus. The offset form is written without
cancellation so the small-energy tail of a profile stays resolvable down to
energies far below machine epsilon times the state magnitude.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np
from scipy.optimize import brentq

from .errors import (
    AdmissibilityError,
    BracketError,
    DomainError,
    FrictionError,
    HypothesisError,
)

GRID_POINTS = 10_000
SIGN_TOL = 1e-12

# Gauss-Legendre nodes mapped to [0, 1] for the near-equilibrium potential.
_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)
_GL_T = 0.5 * (_GL_X + 1.0)
_GL_W = 0.5 * _GL_W


# --------------------------------------------------------------------------
# stress laws and model families
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class StressLaw:
    """Closed-form stress-strain law sigma(u).

    kind: ``sqrt`` (k*sqrt(u)), ``power`` (k*u**q), ``cubic`` (u**3 + a*u)
    or ``linear`` (k*u). ``linear`` exists to exercise the contact
    discontinuity case.
    """

    kind: str
    k: float = 1.0
    q: float = 0.5
    a: float = 1.0

    def __post_init__(self):
        if self.kind not in ("sqrt", "power", "cubic", "linear"):
            raise DomainError(f"unknown stress law {self.kind!r}")
        if self.kind == "power" and (self.q <= 0 or self.k <= 0):
            raise DomainError("power law needs q > 0 and k > 0")
        if self.kind in ("sqrt", "linear") and self.k <= 0:
            raise DomainError("stress coefficient must be positive")
        if self.kind == "cubic" and self.a <= 0:
            raise DomainError("cubic law needs a > 0 for sigma' > 0")

    @property
    def domain(self) -> tuple[float, float]:
        if self.kind in ("sqrt", "power"):
            return (0.0, math.inf)
        return (-math.inf, math.inf)

    def in_domain(self, u) -> bool:
        lo, hi = self.domain
        u = np.asarray(u)
        return bool(np.all((u > lo) & (u < hi)))

    def sigma(self, u):
        if self.kind == "sqrt":
            return self.k * np.sqrt(u)
        if self.kind == "power":
            return self.k * np.power(u, self.q)
        if self.kind == "cubic":
            return u**3 + self.a * u
        return self.k * u

    def dsigma(self, u):
        if self.kind == "sqrt":
            return 0.5 * self.k / np.sqrt(u)
        if self.kind == "power":
            return self.k * self.q * np.power(u, self.q - 1.0)
        if self.kind == "cubic":
            return 3.0 * u**2 + self.a
        return self.k + 0.0 * u

    def d2sigma(self, u):
        if self.kind == "sqrt":
            return -0.25 * self.k / np.power(u, 1.5)
        if self.kind == "power":
            return self.k * self.q * (self.q - 1.0) * np.power(u, self.q - 2.0)
        if self.kind == "cubic":
            return 6.0 * u
        return 0.0 * u

    def antiderivative(self, u):
        if self.kind == "sqrt":
            return (2.0 / 3.0) * self.k * np.power(u, 1.5)
        if self.kind == "power":
            return self.k * np.power(u, self.q + 1.0) / (self.q + 1.0)
        if self.kind == "cubic":
            return 0.25 * u**4 + 0.5 * self.a * u**2
        return 0.5 * self.k * u**2

    def increment(self, u, v):
        """sigma(u + v) - sigma(u) without cancellation for small v."""
        if self.kind == "sqrt":
            return self.k * v / (np.sqrt(u + v) + np.sqrt(u))
        if self.kind == "power":
            return self.k * np.power(u, self.q) * np.expm1(self.q * np.log1p(v / u))
        if self.kind == "cubic":
            return v * (3.0 * u * u + 3.0 * u * v + v * v + self.a)
        return self.k * v


@dataclass(frozen=True)
class Elasticity:
    """p-system u_t = v_x, v_t = sigma(u)_x + eps v_xx - delta u_xxx."""

    stress: StressLaw
    name: str = field(default="elasticity", init=False)


@dataclass(frozen=True)
class QHD:
    """Quantum hydrodynamics with artificial viscosity, pressure rho**gamma."""

    gamma: float
    name: str = field(default="qhd", init=False)

    def __post_init__(self):
        if not self.gamma >= 1.0:
            raise DomainError("QHD needs gamma >= 1")

    def pressure(self, rho):
        return np.power(rho, self.gamma)

    def dpressure(self, rho):
        return self.gamma * np.power(rho, self.gamma - 1.0)


@dataclass(frozen=True)
class Boussinesq:
    """Dissipative Peregrine-Boussinesq system, traveling speed s > 1."""

    s: float
    name: str = field(default="boussinesq", init=False)

    def __post_init__(self):
        if not self.s > 1.0:
            raise DomainError("Boussinesq traveling waves need s > 1")


ModelFamily = Union[Elasticity, QHD, Boussinesq]


@dataclass(frozen=True)
class ShockData:
    """End states, speed and admissibility verdicts of a shock.

    ``u_minus``/``u_plus`` carry strain (elasticity), density (QHD) or the
    velocity (Boussinesq). ``v_minus``/``v_plus`` carry the elasticity
    velocity, the QHD fluid velocity (Galilean frame with zero velocity on the
    right) or the reduced Boussinesq elevation.
    """

    u_minus: float
    u_plus: float
    v_minus: float
    v_plus: float
    s: float
    family_index: int
    m: Optional[float] = None
    lax: bool = False
    wendroff: bool = False
    strengthened: bool = False


# --------------------------------------------------------------------------
# shock construction
# --------------------------------------------------------------------------

def shock_speed(stress: StressLaw, u_minus: float, u_plus: float, family: int = 2,
                v_minus: float = 0.0) -> ShockData:
    """Rankine-Hugoniot speed and velocity jump for an elasticity shock."""
    if family not in (1, 2):
        raise DomainError("family must be 1 or 2")
    if u_minus == u_plus:
        raise DomainError("end states coincide")
    if not stress.in_domain([u_minus, u_plus]):
        raise DomainError("end state outside the stress domain")
    slope = stress.increment(u_minus, u_plus - u_minus) / (u_plus - u_minus)
    if not slope > 0:
        raise DomainError(f"chord slope {slope!r} <= 0: no real shock speed")
    s = math.sqrt(slope) if family == 2 else -math.sqrt(slope)
    v_plus = v_minus - s * (u_plus - u_minus)
    shock = ShockData(u_minus=float(u_minus), u_plus=float(u_plus), v_minus=float(v_minus),
                      v_plus=float(v_plus), s=s, family_index=family)
    verdicts = _elasticity_verdicts(stress, shock)
    return _with_verdicts(shock, verdicts)


def qhd_mass_flux(gamma: float, rho_minus: float, rho_plus: float, family: int = 2) -> ShockData:
    """Mass flux m and speed of a QHD (isentropic gas) shock.

    The Galilean frame puts the fluid velocity on the right at zero, so
    s = -m / rho_plus.
    """
    model = QHD(gamma)
    if family not in (1, 2):
        raise DomainError("family must be 1 or 2")
    if not (rho_minus > 0 and rho_plus > 0):
        raise DomainError("densities must be positive")
    if rho_minus == rho_plus:
        raise DomainError("end states coincide")
    p_m, p_p = model.pressure(rho_minus), model.pressure(rho_plus)
    m2 = -(p_p - p_m) / (1.0 / rho_plus - 1.0 / rho_minus)
    if not m2 > 0:
        raise DomainError(f"m^2 = {m2!r} <= 0")
    if family == 2 and not rho_plus < rho_minus:
        raise AdmissibilityError("a 2-shock requires rho_plus < rho_minus")
    if family == 1 and not rho_plus > rho_minus:
        raise AdmissibilityError("a 1-shock requires rho_plus > rho_minus")
    m = -math.sqrt(m2) if family == 2 else math.sqrt(m2)
    s = -m / rho_plus
    u_minus = s + m / rho_minus
    bounds = [r * r * model.dpressure(r) for r in (rho_minus, rho_plus)]
    lax = bool(min(bounds) < m2 < max(bounds))
    return ShockData(u_minus=float(rho_minus), u_plus=float(rho_plus), v_minus=float(u_minus),
                     v_plus=0.0, s=float(s), family_index=family, m=float(m),
                     lax=lax, wendroff=lax, strengthened=lax)


def boussinesq_endstate(s: float) -> tuple[float, float, float]:
    """Right state (u_plus, eta_plus) and alpha(s) = phi'(u_plus) for speed s."""
    if not s > 1.0:
        raise DomainError("Boussinesq end state needs s > 1")
    root = math.sqrt(s * s + 8.0)
    u_plus = 0.5 * (3.0 * s - root)
    eta_plus = u_plus / (u_plus - s)
    d = s - root
    alpha = 0.5 * d + 4.0 * s / (d * d)
    return u_plus, eta_plus, alpha


def boussinesq_shock(s: float) -> ShockData:
    u_plus, eta_plus, alpha = boussinesq_endstate(s)
    ok = alpha > 0
    return ShockData(u_minus=0.0, u_plus=u_plus, v_minus=0.0, v_plus=eta_plus, s=float(s),
                     family_index=2, lax=ok, wendroff=ok, strengthened=ok)


def _with_verdicts(shock: ShockData, verdicts: dict) -> ShockData:
    return ShockData(**{**shock.__dict__, "lax": verdicts["H_L"], "wendroff": verdicts["H_E"],
                        "strengthened": verdicts["H_sE"] and verdicts["H_oE"]})


# --------------------------------------------------------------------------
# reduced evaluators per model
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class _Reduction:
    """Raw reduced evaluators before landmarks and hypothesis checks."""

    phi_rel: Callable
    dphi_rel: Callable
    antideriv: Callable
    u_minus: float
    u_plus: float
    c_raw_per_eps: Callable  # (epsilon, delta) -> signed friction before reorientation
    gamma_f: float
    domain: tuple[float, float]
    theta_unit: Callable  # delta -> |d theta / d tau|
    theta_sign: float  # theta direction before reorientation
    raw_Phi_plus: float = 0.0


def _reduce(model: ModelFamily, shock: ShockData) -> _Reduction:
    if isinstance(model, Elasticity):
        return _reduce_elasticity(model, shock)
    if isinstance(model, QHD):
        return _reduce_qhd(model, shock)
    if isinstance(model, Boussinesq):
        return _reduce_boussinesq(model, shock)
    raise TypeError(f"unknown model {model!r}")


def _reduce_elasticity(model: Elasticity, shock: ShockData) -> _Reduction:
    st = model.stress
    s2 = shock.s * shock.s
    # canonical saddle sits on the left for 2-shocks and on the right for 1-shocks
    if shock.s > 0:
        a, b = shock.u_minus, shock.u_plus
    else:
        a, b = shock.u_plus, shock.u_minus
    sig_b = float(st.sigma(b))

    def phi_rel(v):
        return -(st.increment(b, v) - s2 * v)

    def dphi_rel(v):
        return -(st.dsigma(b + v) - s2)

    def antideriv(u):
        return -(st.antiderivative(u) - sig_b * u - 0.5 * s2 * (u - b) ** 2)

    s = shock.s
    return _Reduction(phi_rel, dphi_rel, antideriv, a, b,
                      lambda eps, delta: s * eps / math.sqrt(delta), 1.0, st.domain,
                      lambda delta: math.sqrt(delta), 1.0)


def _reduce_qhd(model: QHD, shock: ShockData) -> _Reduction:
    g = model.gamma
    rho_m, rho_p, m = shock.u_minus, shock.u_plus, shock.m
    m2 = m * m
    # canonical right state is the spiral; for 2-shocks that is rho_plus
    if shock.s > 0:
        rho_a, rho_b = rho_m, rho_p
    else:
        rho_a, rho_b = rho_p, rho_m
    pb = rho_b**g
    wb = 1.0 / rho_b
    sig_b = -(rho_b**g)

    def phi_rel(v):
        rho = rho_b * np.exp(v)
        G = pb * np.expm1(g * v) + m2 * wb * np.expm1(-v)
        return -2.0 * G / rho

    def dphi_rel(v):
        rho = rho_b * np.exp(v)
        return -phi_rel(v) - 2.0 * (g * np.power(rho, g - 1.0) - m2 / rho**2)

    def S(w):
        # antiderivative of sigma(w) = -w**(-gamma)
        if g == 1.0:
            return -np.log(w)
        return -np.power(w, 1.0 - g) / (1.0 - g)

    def antideriv(x):
        w = np.exp(-x)
        return -2.0 * (S(w) - sig_b * w - 0.5 * m2 * (w - wb) ** 2)

    s = shock.s
    return _Reduction(phi_rel, dphi_rel, antideriv, math.log(rho_a), math.log(rho_b),
                      lambda eps, delta: s * eps / math.sqrt(delta), 2.0, (-math.inf, math.inf),
                      lambda delta: math.sqrt(delta), 1.0)


def _reduce_boussinesq(model: Boussinesq, shock: ShockData) -> _Reduction:
    s = model.s
    b = shock.u_plus

    def phi_rel(v):
        u = b + v
        return v * (-s + s / ((s - u) * (s - b)) + b + 0.5 * v)

    def dphi_rel(v):
        u = b + v
        return -s + s / (s - u) ** 2 + u

    def antideriv(u):
        return u**3 / 6.0 - 0.5 * s * u**2 - u + s * np.log(s / (s - u))

    return _Reduction(phi_rel, dphi_rel, antideriv, 0.0, b,
                      lambda eps, delta: eps / math.sqrt(s * delta), 1.0,
                      (-math.inf, s * (1.0 - 1e-9)),
                      lambda delta: math.sqrt(s * delta), -1.0,
                      raw_Phi_plus=float(antideriv(b)))


# --------------------------------------------------------------------------
# the profile problem
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ProfileProblem:
    """Reduced scalar traveling-wave problem u'' + gamma_f c u' + phi(u) = 0."""

    phi_rel: Callable
    dphi_rel: Callable
    antideriv: Callable
    u_minus: float
    u_plus: float
    u_s: float
    c: float
    gamma_f: float
    E_max: float
    E_m: float
    convex_lo: float
    convex_hi: float
    orientation: int
    c_star: float
    domain: tuple[float, float] = (-math.inf, math.inf)
    theta_scale: float = 1.0
    epsilon: Optional[float] = None
    delta: Optional[float] = None
    model: Optional[ModelFamily] = None
    shock: Optional[ShockData] = None
    raw_Phi_plus: float = 0.0
    u_s_capped: bool = False

    @property
    def overdamped(self) -> bool:
        return self.c >= self.c_star

    @property
    def span(self) -> float:
        return abs(self.u_plus - self.u_minus)

    @property
    def E_stop(self) -> float:
        return 1e-12 * self.E_max

    # evaluators in the natural variable
    def phi(self, u):
        return self.phi_rel(np.asarray(u, dtype=float) - self.u_plus)

    def dphi(self, u):
        return self.dphi_rel(np.asarray(u, dtype=float) - self.u_plus)

    def Phi(self, u):
        return self.Phi_rel(np.asarray(u, dtype=float) - self.u_plus)

    def Phi_rel(self, v):
        """Potential at offset v from u_plus (Phi(u_plus) = 0)."""
        return _potential(self.phi_rel, self.antideriv, self.u_plus, 0.1 * self.span, v)

    def energy(self, u, w):
        return 0.5 * np.asarray(w) ** 2 + self.Phi(u)

    def with_friction(self, c: float) -> "ProfileProblem":
        """Same potential, different friction (used for c-sweeps)."""
        return _replace(self, c=float(c))


def _replace(obj, **changes):
    return type(obj)(**{**obj.__dict__, **changes})


def _potential(phi_rel, antideriv, u_plus, radius, v):
    v_arr = np.asarray(v, dtype=float)
    scalar = v_arr.ndim == 0
    v_arr = np.atleast_1d(v_arr)
    out = np.empty_like(v_arr)
    near = np.abs(v_arr) <= radius
    if np.any(near):
        vn = v_arr[near]
        vals = phi_rel(vn[:, None] * _GL_T[None, :])
        out[near] = vn * (vals @ _GL_W)
    if np.any(~near):
        out[~near] = antideriv(u_plus + v_arr[~near]) - antideriv(u_plus)
    return float(out[0]) if scalar else out


def _landmark_problem(red: _Reduction, c: float, gamma_f: float, **extra) -> ProfileProblem:
    """Compute u_s, E_max, E_m and convexity bounds for a reduction."""
    a, b = red.u_minus, red.u_plus
    o = 1 if b > a else -1
    span = abs(b - a)

    def Phi(u):
        return _potential(red.phi_rel, red.antideriv, b, 0.1 * span, np.asarray(u, dtype=float) - b)

    E_max = float(Phi(a))
    if not E_max > 0:
        raise HypothesisError(f"Phi(u_minus) = {E_max!r} is not positive: u_minus is not a maximum")
    u_s, capped = _find_u_s(Phi, b, o, span, E_max, red.domain)
    dphi = lambda u: red.dphi_rel(np.asarray(u, dtype=float) - b)  # noqa: E731

    near_infl = _first_sign_change(dphi, b, a)
    far_infl = _first_sign_change(dphi, b, u_s)
    near_pt = near_infl if near_infl is not None else a
    far_pt = far_infl if far_infl is not None else u_s
    lo_side = b + 0.9 * (near_pt - b)
    hi_side = b + 0.9 * (far_pt - b)
    E_m = 0.9 * min(Phi(lo_side), Phi(hi_side))
    c_star = 2.0 * math.sqrt(max(float(dphi(b)), 0.0)) / gamma_f
    return ProfileProblem(phi_rel=red.phi_rel, dphi_rel=red.dphi_rel, antideriv=red.antideriv,
                          u_minus=a, u_plus=b, u_s=u_s, c=float(c), gamma_f=gamma_f,
                          E_max=E_max, E_m=float(E_m), convex_lo=min(lo_side, hi_side),
                          convex_hi=max(lo_side, hi_side), orientation=o, c_star=c_star,
                          domain=red.domain, raw_Phi_plus=red.raw_Phi_plus, u_s_capped=capped,
                          **extra)


def _first_sign_change(f, start, stop, n=2000):
    """First zero of f moving from start towards stop (f(start) > 0), or None."""
    grid = np.linspace(start, stop, n + 1)[1:]
    vals = f(grid)
    bad = np.nonzero(vals <= 0)[0]
    if bad.size == 0:
        return None
    i = bad[0]
    lo = start if i == 0 else grid[i - 1]
    if vals[i] == 0:
        return float(grid[i])
    return float(brentq(lambda u: float(f(u)), lo, grid[i], xtol=1e-15, rtol=1e-15))


def _find_u_s(Phi, u_plus, o, span, E_max, domain):
    lo, hi = domain
    edge = hi if o > 0 else lo
    step = 0.5 * span
    inner = u_plus
    capped = False
    while True:
        outer = u_plus + o * step
        if (o > 0 and outer >= edge) or (o < 0 and outer <= edge):
            outer = edge if math.isfinite(edge) else outer
            capped = True
        val = Phi(outer) if math.isfinite(outer) else math.nan
        if math.isfinite(val) and val >= E_max:
            break
        if capped:
            raise BracketError("Phi never reaches E_max inside the domain")
        inner = outer
        step *= 2.0
        if step > 1e8 * span:
            raise BracketError("Phi never reaches E_max")
    u_s = brentq(lambda u: Phi(u) - E_max, inner, outer, xtol=1e-15, rtol=1e-15, maxiter=500)
    return float(u_s), False


def critical_friction(problem: ProfileProblem) -> float:
    """Spiral/node threshold: the equilibrium at u_plus is a spiral iff c < c*."""
    alpha = float(problem.dphi(problem.u_plus))
    if not alpha > 0:
        raise HypothesisError(f"phi'(u_plus) = {alpha!r} <= 0")
    return 2.0 * math.sqrt(alpha) / problem.gamma_f


def eval_potential(problem: ProfileProblem, u: float) -> tuple[float, float]:
    """(phi(u), Phi(u)) with a range check against the extended orbit region."""
    lo_u = min(problem.u_minus, problem.u_s)
    hi_u = max(problem.u_minus, problem.u_s)
    margin = 0.5 * (hi_u - lo_u)
    dlo, dhi = problem.domain
    if not (lo_u - margin <= u <= hi_u + margin) or not (dlo < u < dhi):
        raise DomainError(f"u = {u!r} outside the evaluation range")
    return float(problem.phi(u)), float(problem.Phi(u))


def find_u_s(problem: ProfileProblem) -> float:
    """Far turning point u_s with Phi(u_s) = E_max (recomputed from scratch)."""
    if not problem.E_max > 0:
        raise DomainError("E_max must be positive")
    u_s, _ = _find_u_s(problem.Phi, problem.u_plus, problem.orientation, problem.span,
                       problem.E_max, problem.domain)
    return u_s


# --------------------------------------------------------------------------
# hypotheses
# --------------------------------------------------------------------------

@dataclass
class AdmissibilityReport:
    """Verdicts of all admissibility and structural hypotheses.

    Failures are verdicts, not exceptions; ``messages`` names each failure.
    """

    verdicts: dict
    margins: dict
    messages: list

    @property
    def ok(self) -> bool:
        return all(v for v in self.verdicts.values() if v is not None)

    def failures(self) -> list[str]:
        return [k for k, v in self.verdicts.items() if v is False]


def _phi_checks(red: _Reduction, c: float = 0.0) -> tuple[dict, dict, list, Optional[ProfileProblem]]:
    """(H_phi0)-(H_phi3) in canonical variables, plus the landmark problem."""
    a, b = red.u_minus, red.u_plus
    o = 1 if b > a else -1
    span = abs(b - a)
    scale = max(1.0, span)
    tol = SIGN_TOL * scale
    verdicts, margins, msgs = {}, {}, []
    d_a = float(red.dphi_rel(a - b))
    d_b = float(red.dphi_rel(0.0))
    margins["phi_prime_minus"] = d_a
    margins["phi_prime_plus"] = d_b
    verdicts["H_phi3"] = bool(d_a < 0 and d_b > 0)
    if not verdicts["H_phi3"]:
        msgs.append(f"H_phi3 violated: phi'(u-)={d_a:.6g}, phi'(u+)={d_b:.6g}")

    grid = a + (b - a) * (np.arange(1, GRID_POINTS) / GRID_POINTS)
    vals = o * red.phi_rel(grid - b)
    ok1, where1 = _strict_negative(vals, grid, tol, lambda u: float(o * red.phi_rel(u - b)))
    verdicts["H_phi1"] = ok1
    if not ok1:
        msgs.append(f"H_phi1 violated at u={where1:.6g}")

    problem = None
    try:
        problem = _landmark_problem(red, c, red.gamma_f)
    except (HypothesisError, BracketError) as exc:
        verdicts["H_phi2"] = False
        verdicts["H_phi0"] = False
        msgs.append(f"H_phi0 violated: {exc}")
        return verdicts, margins, msgs, None

    far = b + (problem.u_s - b) * (np.arange(1, GRID_POINTS + 1) / GRID_POINTS)
    ok2, where2 = _strict_negative(-o * red.phi_rel(far - b), far, tol,
                                   lambda u: float(-o * red.phi_rel(u - b)))
    verdicts["H_phi2"] = ok2
    if not ok2:
        msgs.append(f"H_phi2 violated at u={where2:.6g}")

    both = np.concatenate([grid[(grid - b) * o < 0], far[:-1]])
    Pv = problem.Phi(both)
    ok0 = bool(np.all(Pv > -tol * problem.E_max) and np.all(Pv < problem.E_max * (1 + 1e-12)))
    verdicts["H_phi0"] = ok0 and ok1 and ok2
    if not verdicts["H_phi0"]:
        msgs.append("H_phi0 violated: Phi leaves (0, E_max) on (u-, u_s) or extra roots of phi")
    return verdicts, margins, msgs, problem


def _strict_negative(vals, grid, tol, f):
    """Check vals < 0 strictly, refining near-zeros; returns (ok, location)."""
    if np.any(vals > tol):
        return False, float(grid[np.argmax(vals)])
    interior = slice(2, -2) if vals.size > 8 else slice(None)
    v_int, g_int = vals[interior], grid[interior]
    if v_int.size and np.max(v_int) > -tol:
        return False, float(g_int[np.argmax(v_int)])
    # local maxima of a sampled negative function: refine for tangential zeros
    if v_int.size > 2:
        peaks = np.nonzero((v_int[1:-1] > v_int[:-2]) & (v_int[1:-1] > v_int[2:]))[0] + 1
        for i in peaks[:20]:
            lo, hi = g_int[i - 1], g_int[i + 1]
            xs = np.linspace(lo, hi, 201)
            best = max(f(x) for x in xs)
            if best > -tol:
                return False, float(xs[int(np.argmax([f(x) for x in xs]))])
    return True, None


def _elasticity_verdicts(stress: StressLaw, shock: ShockData) -> dict:
    s2 = shock.s * shock.s
    um, up = shock.u_minus, shock.u_plus
    dm, dp = float(stress.dsigma(um)), float(stress.dsigma(up))
    v = {}
    if shock.family_index == 2:
        v["H_L"] = bool(dp < s2 < dm)
    else:
        v["H_L"] = bool(dm < s2 < dp)
    # Wendroff: chord from u_minus lies on the admissible side of the graph
    grid = um + (up - um) * (np.arange(1, GRID_POINTS) / GRID_POINTS)
    g = stress.increment(um, grid - um) - s2 * (grid - um)
    scale = max(1.0, abs(float(stress.sigma(up)) - float(stress.sigma(um))))
    # the admissible side of the chord flips with the state ordering and the family
    side = math.copysign(1.0, up - um) * (1.0 if shock.family_index == 2 else -1.0)
    v["H_E"] = bool(np.all(side * g >= -SIGN_TOL * scale))
    red = _reduce_elasticity(Elasticity(stress), shock)
    pv, _, _, _ = _phi_checks(red)
    v["H_sE"] = pv["H_phi1"]
    v["H_oE"] = pv["H_phi2"]
    return v


def validate_admissibility(model: ModelFamily, shock: ShockData,
                           problem: Optional[ProfileProblem] = None) -> AdmissibilityReport:
    """Evaluate every admissibility and structural hypothesis for a shock."""
    red = _reduce(model, shock)
    c = problem.c if problem is not None else 0.0
    verdicts, margins, msgs, _ = _phi_checks(red, c)
    out = {}
    if isinstance(model, Elasticity):
        st = model.stress
        s2 = shock.s * shock.s
        um, up = shock.u_minus, shock.u_plus
        dm, dp = float(st.dsigma(um)), float(st.dsigma(up))
        margins["lax_minus"] = (dm - s2) if shock.family_index == 2 else (s2 - dm)
        margins["lax_plus"] = (s2 - dp) if shock.family_index == 2 else (dp - s2)
        ev = _elasticity_verdicts(st, shock)
        out["H_L"] = ev["H_L"]
        if not ev["H_L"]:
            kind = "equality (contact discontinuity)" if min(abs(margins["lax_minus"]),
                                                             abs(margins["lax_plus"])) <= 1e-14 else "inequality"
            msgs.insert(0, f"H_L violated: Lax {kind}, s^2={s2:.10g}, "
                           f"sigma'(u-)={dm:.10g}, sigma'(u+)={dp:.10g}")
        out["H_E"] = ev["H_E"]
        out["H_sE"] = verdicts["H_phi1"]
        out["H_oE"] = verdicts.get("H_phi2", False)
        if not out["H_sE"]:
            msgs.append(next((m.replace("H_phi1", "H_sE") for m in msgs if m.startswith("H_phi1")),
                             "H_sE violated"))
        grid = np.linspace(min(um, up), max(um, up), 1001)
        # sufficient condition for concave stress; not applicable otherwise
        if np.all(st.d2sigma(grid) < 0):
            ordered = (um < up) if shock.s > 0 else (um > up)
            out["H_gn"] = bool(ev["H_L"] and ordered and shock.v_minus > shock.v_plus)
        else:
            out["H_gn"] = None
    elif isinstance(model, QHD):
        out["H_L"] = shock.lax
        if not shock.lax:
            msgs.insert(0, "H_L violated: m^2 outside (rho^2 p')(rho+-) bounds")
        rho = np.linspace(min(shock.u_minus, shock.u_plus) * 0.5, max(shock.u_minus, shock.u_plus) * 2, 1001)
        g = model.gamma
        out["H_gn"] = bool(np.all(g * (g + 1.0) * np.power(rho, g) > 0))
        out["H_sE"] = verdicts["H_phi1"]
        out["H_oE"] = verdicts.get("H_phi2", False)
    else:
        _, _, alpha = boussinesq_endstate(model.s)
        out["H_L"] = bool(alpha > 0)
        out["H_sE"] = verdicts["H_phi1"]
        out["H_oE"] = verdicts.get("H_phi2", False)
    out.update(verdicts)
    return AdmissibilityReport(verdicts=out, margins=margins, messages=msgs)


# --------------------------------------------------------------------------
# building the profile problem
# --------------------------------------------------------------------------

def build_profile_problem(model: ModelFamily, shock: ShockData, epsilon: float,
                          delta: float) -> ProfileProblem:
    """Reduce a shock of ``model`` with diffusion epsilon and dispersion delta.

    Raises HypothesisError when any of (H_phi0)-(H_phi3) fails. A friction at
    or above the spiral threshold only issues a FrictionError warning.
    """
    if not (epsilon > 0 and delta > 0):
        raise DomainError("epsilon and delta must be positive")
    red = _reduce(model, shock)
    c_raw = red.c_raw_per_eps(epsilon, delta)
    verdicts, _, msgs, problem = _phi_checks(red, abs(c_raw))
    if problem is None or not all(verdicts[k] for k in ("H_phi0", "H_phi1", "H_phi2", "H_phi3")):
        raise HypothesisError("; ".join(msgs) or "hypothesis failure")
    tau_sign = 1.0 if c_raw > 0 else -1.0
    theta_scale = red.theta_sign * tau_sign * red.theta_unit(delta)
    problem = _replace(problem, theta_scale=theta_scale, epsilon=float(epsilon),
                       delta=float(delta), model=model, shock=shock)
    if problem.overdamped:
        warnings.warn(FrictionError(f"c = {problem.c:.6g} >= c* = {problem.c_star:.6g}: "
                                    "profile is non-oscillatory"), stacklevel=2)
    return problem


def delta_for_friction(model: ModelFamily, shock: ShockData, c: float, epsilon: float) -> float:
    """Dispersion delta giving friction c at diffusion epsilon."""
    red = _reduce(model, shock)
    c1 = abs(red.c_raw_per_eps(epsilon, 1.0))
    return (c1 / c) ** 2


def problem_for_friction(model: ModelFamily, shock: ShockData, c: float,
                         epsilon: float = 1e-3) -> ProfileProblem:
    delta = delta_for_friction(model, shock, c, epsilon)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", FrictionError)
        problem = build_profile_problem(model, shock, epsilon, delta)
    # pin c exactly to the requested value
    return problem.with_friction(c)


def synthetic_problem(phi_rel, dphi_rel, antideriv, u_minus, u_plus, c, gamma_f=1.0,
                      domain=(-math.inf, math.inf)) -> ProfileProblem:
    """Profile problem from bare evaluators (tests and custom potentials)."""
    dm, dp = float(dphi_rel(u_minus - u_plus)), float(dphi_rel(0.0))
    scale = max(abs(dm), abs(dp), 1.0) * abs(u_plus - u_minus)
    if abs(float(phi_rel(u_minus - u_plus))) > 1e-8 * scale or abs(float(phi_rel(0.0))) > 1e-8 * scale:
        raise HypothesisError("phi must vanish at both end states")
    if not dm < 0:
        raise HypothesisError(f"phi'(u_minus) = {dm:.6g} is not negative: no saddle")
    if not dp > 0:
        raise HypothesisError(f"phi'(u_plus) = {dp:.6g} is not positive: no center")
    red = _Reduction(phi_rel, dphi_rel, antideriv, u_minus, u_plus,
                     lambda e, d: c, gamma_f, domain, lambda d: 1.0, 1.0)
    return _landmark_problem(red, c, gamma_f)


def harmonic_problem(k: float = 1.0, u_plus: float = 0.0, c: float = 0.0,
                     E_max: float = 1e6) -> ProfileProblem:
    """Pure quadratic potential Phi = k (u - u_plus)^2 / 2 (no saddle).

    Landmarks are filled with placeholders so the integrator can be driven
    directly; there is no heteroclinic for this potential.
    """
    return ProfileProblem(
        phi_rel=lambda v: k * v,
        dphi_rel=lambda v: k + 0.0 * np.asarray(v, dtype=float),
        antideriv=lambda u: 0.5 * k * (np.asarray(u, dtype=float) - u_plus) ** 2,
        u_minus=u_plus - math.sqrt(2 * E_max / k), u_plus=u_plus,
        u_s=u_plus + math.sqrt(2 * E_max / k), c=c, gamma_f=1.0, E_max=E_max,
        E_m=0.5 * E_max, convex_lo=-math.inf, convex_hi=math.inf, orientation=1,
        c_star=2.0 * math.sqrt(k))
