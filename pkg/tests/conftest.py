import numpy as np
import pytest

from ellipsoid_traj.metric import EllipticMetric

# acceptance lines collected by tests/test_acceptance.py, printed at the end
ACCEPTANCE_LINES: list = []


@pytest.fixture
def m():
    return EllipticMetric(4.0, 9.0, 16.0)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
