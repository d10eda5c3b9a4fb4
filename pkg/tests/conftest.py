import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from centerlab.generators import dense_random, psd_random

settings.register_profile(
    "default", deadline=None, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)
grid_values = st.sampled_from([0.3, 0.5, 1.0, 2.0])


@st.composite
def random_matrices(draw, dim_max=12, allow_deficient=True):
    d = draw(st.integers(2, dim_max))
    deficit = draw(st.integers(0, d - 1)) if allow_deficient else 0
    return dense_random(d, draw(seeds), deficit)


@st.composite
def psd_matrices(draw, dim_max=12):
    d = draw(st.integers(1, dim_max))
    return psd_random(d, draw(seeds), (0.1, 3.0))


@pytest.fixture
def jordan2():
    return np.array([[1, 1], [0, 1]], dtype=complex)


@pytest.fixture
def nilpotent2():
    return np.array([[0, 2], [0, 0]], dtype=complex)


# acceptance criteria report -------------------------------------------------

_CRITERIA: dict[int, str] = {}


def pytest_runtest_logreport(report):
    name = report.nodeid.rsplit("::", 1)[-1]
    if "test_acceptance" not in report.nodeid or not name.startswith("test_criterion_"):
        return
    n = int(name.split("_")[2])
    if report.when == "call" or report.failed:
        if report.failed:
            _CRITERIA[n] = "FAIL"
        else:
            _CRITERIA.setdefault(n, "PASS")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        terminalreporter.write_line(f"criterion {n}: {_CRITERIA[n]}")
