import pytest

from tmotif import Motif, TemporalGraph

G1_EDGES = [(1, 2, 10), (2, 3, 20), (3, 4, 30)]
G2_EDGES = [(1, 2, 10), (1, 2, 12), (2, 3, 20), (3, 4, 28), (3, 5, 29)]
# 4-cycle graph with one valid match plus three near misses
NEAR_MISS_EDGES = [(0, 1, 10), (1, 2, 20), (1, 2, 80), (2, 3, 40), (3, 2, 50), (3, 0, 60),
              (3, 0, 200)]

PATH3 = Motif(4, ((0, 1), (1, 2), (2, 3)), "path3")
CYCLE4 = Motif(4, ((0, 1), (1, 2), (2, 3), (3, 0)), "cycle4")


@pytest.fixture
def g1():
    return TemporalGraph.from_edges(G1_EDGES)


@pytest.fixture
def g2():
    return TemporalGraph.from_edges(G2_EDGES)


@pytest.fixture
def near_miss():
    return TemporalGraph.from_edges(NEAR_MISS_EDGES)


# one summary line per acceptance criterion, printed after the run
ACCEPTANCE: dict[int, str] = {}


def record(criterion: int, ok: bool, detail: str) -> bool:
    line = f"criterion {criterion}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE[criterion] = line
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
