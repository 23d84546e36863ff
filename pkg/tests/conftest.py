import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from subcycle import DirectedGraph

# The running example of the test suite: 8 nodes, 15 edges, 12 simple
# cycles, minimum feedback edge set of size 5.
TANGLE_EDGES = [
    (1, 2), (2, 3), (3, 5), (3, 7), (3, 8), (4, 5), (5, 3), (5, 4),
    (5, 7), (6, 3), (6, 5), (7, 6), (7, 8), (8, 1), (8, 7),
]

TANGLE_CYCLES = {
    (1, 2, 3, 5, 7, 8),
    (1, 2, 3, 8),
    (1, 2, 3, 7, 8),
    (3, 5, 7, 6),
    (3, 5),
    (3, 8, 7, 6),
    (3, 8, 7, 6, 5),
    (3, 7, 6),
    (3, 7, 6, 5),
    (4, 5),
    (7, 8),
    (5, 7, 6),
}

TANGLE_MIN_REMOVAL = 5


def make_tangle() -> DirectedGraph:
    return DirectedGraph.from_edges(9, TANGLE_EDGES)


@pytest.fixture
def tangle() -> DirectedGraph:
    return make_tangle()


def pytest_runtest_logreport(report):
    """One visible pass/fail line per acceptance criterion."""
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return
    name = report.nodeid.rsplit("::", 1)[-1]
    outcome = "PASS" if report.passed else "FAIL"
    print(f"\n[acceptance] {name}: {outcome}", file=sys.stderr)
