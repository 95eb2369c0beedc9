import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from hecke.padic import PMatrix, PrecisionContext
from hecke.session import RunConfig, Session

settings.register_profile(
    "repo", derandomize=True, deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("repo")


def random_K(rng: random.Random, n: int, p: int, det_one: bool = False):
    """Exact random element of GLn(Z) that is invertible mod p (hence in GLn(Z_p))."""
    while True:
        m = [[Fraction(rng.randrange(-30, 31)) for _ in range(n)] for _ in range(n)]
        d = _det(m)
        if d % p:
            break
    if det_one:
        # scale the first row by 1/d, a p-adic unit
        m[0] = [x / d for x in m[0]]
    return m


def _det(m):
    n = len(m)
    if n == 1:
        return m[0][0]
    return sum((-1) ** j * m[0][j] * _det([r[:j] + r[j + 1:] for r in m[1:]]) for j in range(n))


@pytest.fixture
def ctx5():
    return PrecisionContext(5, 30, 1)


@pytest.fixture
def session():
    return Session(RunConfig())


@pytest.fixture
def rng():
    return random.Random(20240601)


def pm(ctx, rows):
    return PMatrix.from_rows(ctx, rows)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
