import numpy as np
import pytest

from blochsectors.qstate import random_state

# (N, d) cells small enough for the brute-force Bloch oracle
ORACLE_CELLS = [(2, 2), (3, 2), (4, 2), (5, 2), (2, 3), (3, 3), (4, 3), (2, 4), (3, 4), (2, 5)]


def corpus(n, d, count, base_seed=0):
    """Deterministic Haar-random states for one (N, d) cell."""
    return [random_state(n, d, seed=base_seed + 1000 * n + 100 * d + i) for i in range(count)]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
