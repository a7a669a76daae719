import pytest

from cuspsums.coeffs import build_cusp_form, divisor_tables
from cuspsums.sums import build_prefix_cache

DELTA_N = 2**18

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def delta():
    return build_cusp_form("delta", DELTA_N)


@pytest.fixture(scope="session")
def divisors():
    return divisor_tables(DELTA_N)


@pytest.fixture(scope="session")
def delta_cache(delta):
    caches = {}

    def get(h, k):
        if (h, k) not in caches:
            caches[(h, k)] = build_prefix_cache(delta, h, k)
        return caches[(h, k)]

    return get


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
