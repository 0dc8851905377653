import warnings

import pytest
from hypothesis import settings

from dispshock.errors import FrictionError
from dispshock.heteroclinic import shoot_heteroclinic
from dispshock.models import (
    QHD,
    Boussinesq,
    Elasticity,
    StressLaw,
    boussinesq_shock,
    build_profile_problem,
    problem_for_friction,
    qhd_mass_flux,
    shock_speed,
)

# fixed example sequence so every run of the suite is identical
settings.register_profile("deterministic", derandomize=True, database=None)
settings.load_profile("deterministic")


@pytest.fixture(scope="session")
def sqrt_law():
    return StressLaw("sqrt")


@pytest.fixture(scope="session")
def fig3(sqrt_law):
    """sigma = sqrt(u), u- = 4, u+ = 5 at c = 0.004."""
    model = Elasticity(sqrt_law)
    shock = shock_speed(sqrt_law, 4.0, 5.0, 2)
    return model, shock, problem_for_friction(model, shock, 0.004)


@pytest.fixture(scope="session")
def fig3_profile(fig3):
    return shoot_heteroclinic(fig3[2])


@pytest.fixture(scope="session")
def fig4():
    model = QHD(1.4)
    shock = qhd_mass_flux(1.4, 1.5, 1.0, 2)
    return model, shock, problem_for_friction(model, shock, 0.02)


@pytest.fixture(scope="session")
def fig4_profile(fig4):
    return shoot_heteroclinic(fig4[2])


@pytest.fixture(scope="session")
def bous2():
    model = Boussinesq(2.0)
    shock = boussinesq_shock(2.0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", FrictionError)
        problem = build_profile_problem(model, shock, 1e-2, 1e-2**1.5)
    return model, shock, problem


@pytest.fixture(scope="session")
def bous2_profile(bous2):
    return shoot_heteroclinic(bous2[2])


# ---------------------------------------------------------------- acceptance report
ACCEPTANCE = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[ACCEPTANCE] = {}


@pytest.fixture
def verdict(request):
    """record(criterion, ok, detail): collect one sub-result of an acceptance criterion."""
    store = request.config.stash[ACCEPTANCE]

    def record(criterion: int, ok: bool, detail: str) -> bool:
        store.setdefault(criterion, []).append((bool(ok), detail))
        print(f"criterion {criterion}: {'PASS' if ok else 'FAIL'} {detail}")
        return bool(ok)

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    store = config.stash.get(ACCEPTANCE, {})
    if not store:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(store):
        parts = store[crit]
        status = "PASS" if all(ok for ok, _ in parts) else "FAIL"
        detail = "; ".join(d if ok else f"{d} [FAIL]" for ok, d in parts)
        terminalreporter.write_line(f"criterion {crit:2d}: {status}  {detail}")
