import functools

import numpy as np
import pytest

from rampqss.scheme import SchemeParams, build_scheme

# (q, k, L) triples used throughout; n = 2k - L
PARAMS = [(3, 2, 1), (3, 2, 2), (5, 3, 1), (5, 3, 2), (5, 3, 3), (7, 3, 1), (7, 3, 2)]
SMALL = [(3, 2, 1), (3, 2, 2), (5, 3, 2), (5, 3, 3)]

ACCEPTANCE_LINES: list[str] = []


@functools.lru_cache(maxsize=None)
def scheme_for(q, k, L, points=()):
    return build_scheme(SchemeParams(q, k, L, 2 * k - L, points))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
