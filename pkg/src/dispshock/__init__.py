"""Traveling-wave profiles of diffusive-dispersive shock approximations.

Elasticity (p-system), quantum hydrodynamics and the Peregrine-Boussinesq
system all reduce to u'' + gamma_f c u' + phi(u) = 0; the modules here build
that reduced problem, shoot its heteroclinic orbit, analyze the oscillations
and measure convergence to the limiting shock.
"""

from .analysis import (
    CycleRecord,
    OscillationReport,
    fit_length_scaling,
    oscillation_report,
    period,
    period_ode,
)
from .convergence import ConvergenceRecord, ShockReference, shock_reference, sweep
from .errors import (
    AdmissibilityError,
    BlowupError,
    BracketError,
    ConfigError,
    DispShockError,
    DomainError,
    FrictionError,
    HypothesisError,
    InsufficientDataError,
    NonconvergenceError,
    StepUnderflow,
    TurningPointError,
)
from .heteroclinic import SaddleData, WaveProfile, saddle_analysis, shoot_heteroclinic, to_physical
from .integrate import ExtremumEvent, PhasePoint, Trajectory, energy_audit, integrate_adaptive, locate_events
from .models import (
    QHD,
    Boussinesq,
    Elasticity,
    ProfileProblem,
    ShockData,
    StressLaw,
    boussinesq_endstate,
    boussinesq_shock,
    build_profile_problem,
    critical_friction,
    eval_potential,
    find_u_s,
    problem_for_friction,
    qhd_mass_flux,
    shock_speed,
    validate_admissibility,
)

__version__ = "0.1.0"
