import math

import numpy as np
import pytest

from twosquares import stats


def brute_sots(limit):
    """Boolean table of a^2 + b^2 <= limit, by direct enumeration."""
    table = np.zeros(limit + 1, dtype=bool)
    for a in range(math.isqrt(limit) + 1):
        for b in range(a, math.isqrt(limit - a * a) + 1):
            table[a * a + b * b] = True
    return table


@pytest.fixture(scope="session")
def sots_table():
    return brute_sots(200_000)


@pytest.fixture(scope="session")
def billion_scan():
    """Counts for {0,1}, {0,1,2} and {1} (i.e. N(x)) at x = 10^9, one pass."""
    counts = stats.scan_counts([(0, 1), (0, 1, 2), (1,)], [10**9])[:, 0]
    return {"pairs": int(counts[0]), "triples": int(counts[1]), "N": int(counts[2])}


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
