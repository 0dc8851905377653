import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dispshock.analysis import period, turning_points
from dispshock.errors import BlowupError, DomainError
from dispshock.integrate import (
    PhasePoint,
    default_tau_budget,
    energy_audit,
    integrate_adaptive,
    locate_events,
)
from dispshock.models import harmonic_problem, synthetic_problem


def _harmonic_run(k=1.0, amp=1.0, tau_max=None, **kw):
    pr = harmonic_problem(k)
    start = PhasePoint(0.0, amp, 0.0, 0.5 * k * amp * amp)
    T = 2 * math.pi / math.sqrt(k)
    return pr, integrate_adaptive(pr, start, T if tau_max is None else tau_max, **kw)


def _kdv_like():
    # phi = v - v^2: center at 0, saddle at 1, unbounded escape beyond the saddle
    return synthetic_problem(lambda v: v - v * v, lambda v: 1 - 2 * v, lambda u: u * u / 2 - u**3 / 3, 1.0, 0.0, 0.0)


def test_harmonic_return_error():
    _, tr = _harmonic_run(rtol=1e-12)
    assert abs(tr.u[-1] - 1.0) + abs(tr.w[-1]) <= 1e-8


def test_harmonic_events_at_half_and_full_period():
    _, tr = _harmonic_run(tau_max=2 * math.pi + 0.5, rtol=1e-12)
    kinds = [e.kind for e in tr.events]
    assert kinds == ["min", "max"]
    assert abs(tr.events[0].tau - math.pi) <= 1e-8
    assert abs(tr.events[1].tau - 2 * math.pi) <= 1e-8
    assert abs(tr.events[0].u + 1.0) <= 1e-9


def test_fixed_step_fifth_order():
    errs = []
    for n in (20, 40):
        _, tr = _harmonic_run(fixed_step=2 * math.pi / n)
        errs.append(abs(tr.u[-1] - 1.0) + abs(tr.w[-1]))
    # fifth order gives a factor near 32 per halving; require at least 8
    assert errs[0] / errs[1] >= 8.0


def test_dense_output_matches_exact_solution():
    _, tr = _harmonic_run(rtol=1e-12)
    t = np.linspace(0.0, 2 * math.pi, 1001)
    v, w = tr.evaluate(t)
    assert np.max(np.abs(v - np.cos(t))) <= 1e-8
    assert np.max(np.abs(w + np.sin(t))) <= 1e-8


def test_evaluate_reproduces_nodes():
    _, tr = _harmonic_run()
    v, w = tr.evaluate(tr.tau[:-1])
    assert np.array_equal(v, tr.v[:-1]) or np.max(np.abs(v - tr.v[:-1])) <= 1e-15
    assert np.max(np.abs(w - tr.w[:-1])) <= 1e-15


def test_shifted_moves_events():
    _, tr = _harmonic_run(tau_max=7.0)
    sh = tr.shifted(tr.events[0].tau)
    assert sh.events[0].tau == 0.0
    assert np.allclose(sh.tau + tr.events[0].tau, tr.tau, rtol=0, atol=1e-14)


def test_fig3_closed_orbit(fig3):
    pr = fig3[2].with_friction(0.0)
    E = 0.5 * pr.E_max
    _, v2 = turning_points(pr, E)
    T = period(pr, E, rtol=1e-12)
    tr = integrate_adaptive(pr, PhasePoint(0.0, pr.u_plus + v2, 0.0, E), T, rtol=1e-12)
    assert abs(tr.v[-1] - v2) + abs(tr.w[-1]) <= 1e-8 * pr.span
    assert np.max(np.abs(tr.E - E)) <= 1e-10 * pr.E_max
    assert energy_audit(pr, tr) <= 1e-10


def test_energy_audit_with_friction(fig3_profile, fig4_profile, bous2_profile):
    for prof in (fig3_profile, fig4_profile, bous2_profile):
        assert energy_audit(prof.problem, prof.trajectory) <= 1e-6


def test_energy_audit_single_step(fig3):
    pr = fig3[2]
    start = PhasePoint(0.0, pr.u_plus + 0.3, 0.0, float(pr.Phi(pr.u_plus + 0.3)))
    tr = integrate_adaptive(pr, start, 0.5, fixed_step=0.5)
    assert len(tr) == 2
    assert energy_audit(pr, tr) <= 1e-6


def test_energy_nonincreasing_with_friction(fig3_profile):
    E = fig3_profile.trajectory.E
    assert np.all(np.diff(E) <= 1e-12 * fig3_profile.problem.E_max)


def test_trajectory_stays_in_invariant_region(fig3_profile):
    pr = fig3_profile.problem
    u = fig3_profile.trajectory.u
    tol = 1e-9 * pr.span
    assert np.all(u >= pr.u_minus - tol)
    assert np.all(u <= pr.u_s + tol)


def test_events_alternate(fig3_profile, fig4_profile):
    for prof in (fig3_profile, fig4_profile):
        kinds = [e.kind for e in prof.trajectory.events]
        assert len(kinds) > 10
        assert all(a != b for a, b in zip(kinds, kinds[1:]))


def test_locate_events_is_idempotent(fig4_profile):
    tr = fig4_profile.trajectory
    again = locate_events(tr, fig4_profile.problem)
    assert [e.kind for e in again] == [e.kind for e in tr.events]
    assert np.allclose([e.tau for e in again], [e.tau for e in tr.events], rtol=0, atol=1e-10)


def test_converged_reason_and_stop_level(fig3_profile):
    tr = fig3_profile.trajectory
    assert tr.reason == "converged"
    assert tr.E[-1] < fig3_profile.problem.E_stop


def test_default_budget_grows_like_inverse_friction(fig3):
    pr = fig3[2]
    assert default_tau_budget(pr.with_friction(0.002)) > 1.9 * default_tau_budget(pr)


def test_rtol_out_of_range(fig3):
    pr = fig3[2]
    start = PhasePoint(0.0, pr.u_plus + 0.1, 0.0, 0.0)
    for rtol in (1e-3, 1e-15):
        with pytest.raises(DomainError):
            integrate_adaptive(pr, start, 10.0, rtol=rtol)


def test_start_above_separatrix_rejected(fig3):
    pr = fig3[2]
    with pytest.raises(DomainError):
        integrate_adaptive(pr, PhasePoint(0.0, pr.u_plus, 1.0, 0.5), 10.0)


def test_nonpositive_span_rejected(fig3):
    pr = fig3[2]
    with pytest.raises(DomainError):
        integrate_adaptive(pr, PhasePoint(1.0, pr.u_plus + 0.1, 0.0, 0.0), 1.0)


def test_escape_beyond_saddle_is_blowup():
    pr = _kdv_like()
    with pytest.raises(BlowupError):
        integrate_adaptive(pr, PhasePoint(0.0, 1.1, 0.1, 0.0), 1e4, check_region=False)


def test_equilibrium_start_has_no_events():
    pr = harmonic_problem()
    tr = integrate_adaptive(pr, PhasePoint(0.0, 0.0, 0.0, 0.0), 10.0)
    assert tr.events == ()
    assert np.all(tr.v == 0.0) and np.all(tr.w == 0.0)


@settings(max_examples=20, deadline=None)
@given(st.floats(0.25, 9.0), st.floats(0.05, 3.0))
def test_harmonic_energy_conserved(k, amp):
    pr, tr = _harmonic_run(k, amp, tau_max=3 * 2 * math.pi / math.sqrt(k), rtol=1e-11,
                          atol=1e-14 * amp)
    E0 = 0.5 * k * amp * amp
    # DOPRI5 is not symplectic: the drift grows linearly, about 1e-9 per period here
    assert np.max(np.abs(tr.E - E0)) <= 1e-8 * E0
    assert len([e for e in tr.events if e.kind == "max"]) in (2, 3)


@settings(max_examples=15, deadline=None)
@given(st.floats(0.05, 0.95))
def test_kdv_closed_orbits_return(frac):
    pr = _kdv_like()
    E = frac * pr.E_max
    _, v2 = turning_points(pr, E)
    T = period(pr, E, rtol=1e-12)
    tr = integrate_adaptive(pr, PhasePoint(0.0, v2, 0.0, E), T, rtol=1e-12)
    assert abs(tr.v[-1] - v2) <= 1e-7
    assert abs(tr.w[-1]) <= 1e-7
