import numpy as np
import pytest

ACCEPTANCE_LINES = []


def random_spd(rng, n, shift=0.5):
    a = rng.standard_normal((n + 3, n))
    return a.T @ a + shift * np.eye(n)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
