import pytest

from helpers import e2_system
from sepsys.core import validate_system
from sepsys.testkit import edge_tree_set, path_tree, star_tree


@pytest.fixture
def E2():
    return e2_system()


@pytest.fixture
def path3():
    """Edge tree set of the path 0-1-2 (darts ``a>b`` point at ``b``)."""
    return edge_tree_set(path_tree(3))


@pytest.fixture
def k13():
    return edge_tree_set(star_tree(3))


@pytest.fixture
def degenerate_one():
    return validate_system(["d"], [("d", "d")])


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[number])
