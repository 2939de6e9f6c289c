import pytest

import qspace.dynamics
from qspace.complex import EdgeStatus
from qspace.lattice import build_lattice

# Every split issued by an expansion step anywhere in the suite passes through
# this audit; the acceptance suite asserts no contracted edge was ever offered.
SPLIT_AUDIT = {"splits": 0, "contracted": 0}
ACCEPTANCE_LINES: list[str] = []

_real_split = qspace.dynamics.split_edge


def _audited_split(complex, edge, rng=None):
    SPLIT_AUDIT["splits"] += 1
    if complex.edges[edge].status is EdgeStatus.CONTRACTED:
        SPLIT_AUDIT["contracted"] += 1
    return _real_split(complex, edge, rng)


qspace.dynamics.split_edge = _audited_split


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def square3():
    return build_lattice("square", 3)


@pytest.fixture
def cubic3():
    return build_lattice("cubic", 3)
