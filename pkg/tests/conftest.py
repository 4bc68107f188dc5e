import pytest

from hornlab.core import to_kstructure
from hornlab.generators import complete_hypergraph, cycle_graph, edgeless, fano_plane, path_graph, single_edge

# criterion number -> (title, outcome); filled in by the acceptance tests
ACCEPTANCE: dict[int, list] = {}


def ks(h, k):
    return to_kstructure(h, k)


@pytest.fixture
def K2():
    return ks(complete_hypergraph(2, 2), 2)


@pytest.fixture
def K3():
    return ks(complete_hypergraph(3, 2), 2)


@pytest.fixture
def E3():
    return ks(single_edge(3), 3)


@pytest.fixture
def P3():
    return ks(path_graph(3), 2)


@pytest.fixture
def fano():
    return fano_plane()


@pytest.fixture
def fano3():
    return ks(fano_plane(), 3)


@pytest.fixture
def G1():
    return ks(edgeless(1), 2)


@pytest.fixture
def C21():
    return ks(cycle_graph(21), 2)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    crit = item.get_closest_marker("criterion")
    if crit is None:
        return
    number, title = crit.args
    entry = ACCEPTANCE.setdefault(number, [title, "PASS"])
    if rep.failed:
        entry[1] = "FAIL"
    elif rep.skipped and entry[1] != "FAIL":
        entry[1] = "SKIP"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, status = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:2d} {status}: {title}")
