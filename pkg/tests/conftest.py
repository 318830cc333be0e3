import numpy as np
import pytest
from hypothesis import settings

from abcensus.census import trace_histograms

# first calls into compiled kernels pay a one-off load cost
settings.register_profile("default", deadline=None)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def histograms_20k():
    """Cumulative (Psi_ev, Psi_odd) indexed by N for N <= 20000."""
    ev, od = trace_histograms(20_000)
    return np.cumsum(ev), np.cumsum(od)


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
