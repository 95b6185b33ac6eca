import pytest

from kshcst import complexifier as cx
from kshcst import rootsys as rs


@pytest.fixture
def s1():
    return rs.torus(1)


@pytest.fixture
def su2():
    return rs.type_a(1)


@pytest.fixture
def su3():
    return rs.type_a(2)


@pytest.fixture
def quad():
    return cx.quadratic()


@pytest.fixture
def quart():
    return cx.quartic(0.1)


def pytest_terminal_summary(terminalreporter):
    from tests import test_acceptance
    if test_acceptance.VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.VERDICTS:
            terminalreporter.write_line(line)
