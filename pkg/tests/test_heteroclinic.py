import math
import warnings

import numpy as np
import pytest

from dispshock.errors import DomainError, HypothesisError, NonconvergenceError
from dispshock.heteroclinic import physical_fields, saddle_analysis, shoot_heteroclinic, to_physical
from dispshock.integrate import PhasePoint, integrate_adaptive
from dispshock.models import harmonic_problem, synthetic_problem

LAMBDA_PLUS_FIG3 = 0.116050931805768918  # mpmath, 30 digits, from the closed-form root


def _quadratic_saddle(c):
    # phi(v) = v (v + 1): saddle at u = -1 with phi' = -1, center at 0
    return synthetic_problem(lambda v: v * (v + 1), lambda v: 2 * v + 1, lambda u: u**3 / 3 + u * u / 2,
                             -1.0, 0.0, c)


def test_pure_saddle_eigenvalues():
    sd = saddle_analysis(_quadratic_saddle(0.0))
    assert sd.lambda_plus == 1.0 and sd.lambda_minus == -1.0
    assert sd.spiral
    assert sd.Lambda_pair[0] == pytest.approx(1j) and sd.Lambda_pair[1] == pytest.approx(-1j)


def test_fig3_saddle(fig3):
    pr = fig3[2]
    sd = saddle_analysis(pr)
    assert abs(sd.lambda_plus - LAMBDA_PLUS_FIG3) <= 1e-15
    J = np.array([[0.0, 1.0], [-float(pr.dphi(pr.u_minus)), -pr.gamma_f * pr.c]])
    ev = np.sort(np.linalg.eigvals(J).real)
    assert np.allclose(ev, [sd.lambda_minus, sd.lambda_plus], rtol=1e-12)
    assert sd.spiral
    assert sd.lambda_minus < 0 < sd.lambda_plus < math.sqrt(-float(pr.dphi(pr.u_minus)))
    assert sd.unstable_direction == (1.0, sd.lambda_plus)


def test_node_regime_flag(fig3):
    sd = saddle_analysis(fig3[2].with_friction(0.3))
    assert not sd.spiral
    assert all(z.imag == 0.0 and z.real < 0 for z in sd.Lambda_pair)


def test_saddle_hypothesis_error():
    with pytest.raises(HypothesisError):
        saddle_analysis(harmonic_problem())


def test_fig3_first_maximum_and_terminal_state(fig3_profile):
    pr = fig3_profile.problem
    tr = fig3_profile.trajectory
    first = tr.events[0]
    assert first.kind == "max" and first.tau == 0.0
    assert pr.u_plus < first.u <= pr.u_s + 1e-6
    assert first.E < pr.E_max
    assert abs(tr.u[-1] - 5.0) <= 1e-6


def test_shift_normalization(fig3_profile, fig4_profile):
    for prof in (fig3_profile, fig4_profile):
        u0, w0 = prof.canonical(0.0)
        pr = prof.problem
        assert abs(w0[0]) <= 1e-9 * pr.span * saddle_analysis(pr).lambda_plus
        extreme = np.max(prof.u * pr.orientation)
        assert u0[0] * pr.orientation >= extreme - 1e-12 * pr.span


def test_extrema_bands(fig3_profile):
    pr = fig3_profile.problem
    for e in fig3_profile.trajectory.events:
        if e.kind == "max":
            assert pr.u_plus < e.u <= pr.u_s + 1e-9
        else:
            assert pr.u_minus <= e.u < pr.u_plus


def test_offset_halving_robustness(fig3):
    pr = fig3[2]
    a = shoot_heteroclinic(pr, offset_scale=1e-7)
    b = shoot_heteroclinic(pr, offset_scale=5e-8)
    lo = max(a.tau[0], b.tau[0])
    hi = min(a.trajectory.tau[-1], b.trajectory.tau[-1])
    t = np.linspace(lo, hi, 20001)
    diff = np.max(np.abs(a.canonical(t)[0] - b.canonical(t)[0]))
    assert diff <= 1e-6 * pr.span


def test_backward_exponential_rate(fig3_profile):
    pr = fig3_profile.problem
    tr = fig3_profile.trajectory
    d = np.abs(tr.u - pr.u_minus)
    sel = d < 1e-3 * pr.span
    sel[np.argmax(~sel):] = False  # only the initial approach
    slope = np.polyfit(tr.tau[sel], np.log(d[sel]), 1)[0]
    assert abs(slope / fig3_profile.lambda_plus - 1.0) <= 0.01


def test_analytic_extension_is_continuous(fig3_profile):
    t0 = fig3_profile.tau_start
    left = fig3_profile.canonical(t0 - 1e-9)
    right = fig3_profile.canonical(t0)
    assert abs(left[0][0] - right[0][0]) <= 1e-12
    assert abs(left[1][0] - right[1][0]) <= 1e-12


def test_overdamped_profile_is_monotone(fig3):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        prof = shoot_heteroclinic(fig3[2].with_friction(0.3))
    assert len(prof.trajectory.events) <= 1
    assert abs(prof.trajectory.u[-1] - 5.0) <= 1e-6


def test_qhd_profile(fig4, fig4_profile):
    _, shock, pr = fig4
    assert pr.u_minus == pytest.approx(math.log(1.5), abs=1e-15)
    assert pr.u_plus == 0.0
    f = fig4_profile.fields
    assert np.max(np.abs(f["rho"] * (f["u"] - shock.s) - shock.m)) <= 1e-14 * abs(shock.m)
    assert np.max(np.abs(f["j"] - f["rho"] * f["u"])) <= 1e-14
    assert len(fig4_profile.trajectory.events) > 20
    assert abs(fig4_profile.trajectory.u[-1]) <= 1e-6


def test_boussinesq_right_state(bous2, bous2_profile):
    assert bous2_profile.left_state["eta"] == pytest.approx(-math.sqrt(3.0), abs=1e-12)
    assert bous2_profile.left_state["u"] == pytest.approx(3 - math.sqrt(3.0), abs=1e-12)
    assert bous2_profile.right_state == {"eta": 0.0, "u": 0.0}
    assert bous2[2].theta_scale < 0


@pytest.mark.parametrize("name", ["fig3_profile", "fig4_profile", "bous2_profile"])
def test_end_states_match(name, request):
    prof = request.getfixturevalue(name)
    jump = prof.problem.span
    at_lo = prof.evaluate(prof.theta[0])
    at_hi = prof.evaluate(prof.theta[-1])
    for key in prof.field_names:
        scale = max(jump, abs(prof.left_state[key] - prof.right_state[key]))
        assert abs(at_lo[key] - prof.left_state[key]) <= 1e-5 * scale
        assert abs(at_hi[key] - prof.right_state[key]) <= 1e-5 * scale


def test_theta_is_sorted_and_scaled(fig3_profile, bous2_profile):
    for prof in (fig3_profile, bous2_profile):
        assert np.all(np.diff(prof.theta) >= 0)
        assert np.allclose(np.sort(prof.tau * prof.problem.theta_scale), prof.theta, rtol=0, atol=1e-12)


def test_elasticity_velocity_field(fig3, fig3_profile):
    shock = fig3[1]
    f = fig3_profile.fields
    assert np.allclose(f["v"], shock.v_minus - shock.s * (f["u"] - 4.0), rtol=0, atol=1e-14)
    assert fig3_profile.right_state["v"] == pytest.approx(shock.v_minus - shock.s, abs=1e-14)


def test_constant_trajectory_maps_to_right_state(fig3):
    pr = fig3[2]
    tr = integrate_adaptive(pr, PhasePoint(0.0, pr.u_plus, 0.0, 0.0), 5.0)
    prof = to_physical(pr, pr.model, tr, h=0.0)
    assert np.all(prof.fields["u"] == 5.0)
    assert np.allclose(prof.fields["v"], prof.right_state["v"], rtol=0, atol=1e-15)


def test_boussinesq_pole_is_domain_error(bous2):
    with pytest.raises(DomainError):
        physical_fields(bous2[2], np.array([0.0, 2.0]))


def test_zero_friction_rejected(fig3):
    with pytest.raises(DomainError):
        shoot_heteroclinic(fig3[2].with_friction(0.0))


def test_short_budget_is_nonconvergence(fig3):
    with pytest.raises(NonconvergenceError):
        shoot_heteroclinic(fig3[2], tau_budget=50.0)
    prof = shoot_heteroclinic(fig3[2], tau_budget=50.0, require_convergence=False)
    assert prof.meta["reason"] == "tau_budget"


def test_quadratic_saddle_profile():
    prof = shoot_heteroclinic(_quadratic_saddle(0.1))
    assert abs(prof.trajectory.u[-1]) <= 1e-6
    assert prof.trajectory.events[0].u <= prof.problem.u_s + 1e-9
