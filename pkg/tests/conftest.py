import pytest

from injwords import Alphabet, build_complex

# brute-force count of (pi, x) in S_n x Z/l^n fixing no (a, y); computed once
# by a standalone enumeration and frozen here
FIXED_POINT_FREE = {
    (0, 1): 1, (0, 2): 1, (0, 3): 1,
    (1, 1): 0, (1, 2): 1, (1, 3): 2,
    (2, 1): 1, (2, 2): 5, (2, 3): 13,
    (3, 1): 2, (3, 2): 29, (3, 3): 116,
    (4, 1): 9, (4, 2): 233, (4, 3): 1393,
    (5, 1): 44, (5, 2): 2329, (5, 3): 20894,
}

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def complexes():
    cache = {}

    def get(n, labels):
        if (n, labels) not in cache:
            cache[n, labels] = build_complex(Alphabet(n, labels))
        return cache[n, labels]

    return get


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
