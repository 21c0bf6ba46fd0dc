import numpy as np
import pytest
from hypothesis import settings

import dressedcavity as dc

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")

# baseline working point used throughout: omega_bar=1, g=0.5, delta=0.1


@pytest.fixture(scope="session")
def baseline_params():
    return dc.make_params(1.0, 0.5, delta=0.1, n_modes=1000)


@pytest.fixture(scope="session")
def baseline_spectrum(baseline_params):
    return dc.solve_spectrum(baseline_params)


@pytest.fixture(scope="session")
def baseline_matrix(baseline_params, baseline_spectrum):
    return dc.build_matrix(baseline_params, baseline_spectrum)


@pytest.fixture(scope="session")
def small_params():
    """Cheap 80-mode variant for tests that only need structure."""
    return dc.make_params(1.0, 0.5, delta=0.1, n_modes=80)


@pytest.fixture(scope="session")
def small_spectrum(small_params):
    return dc.solve_spectrum(small_params)


@pytest.fixture(scope="session")
def small_matrix(small_params, small_spectrum):
    return dc.build_matrix(small_params, small_spectrum)


@pytest.fixture
def rng():
    return np.random.default_rng(20250808)


ACCEPTANCE_RESULTS: list[str] = []


@pytest.fixture
def acceptance_log():
    """Recorder for per-criterion pass/fail lines, printed at session end."""

    def record(name: str, passed: bool, detail: str) -> None:
        status = "PASS" if passed else "FAIL"
        ACCEPTANCE_RESULTS.append(f"{status}  {name}: {detail}")

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(line)
