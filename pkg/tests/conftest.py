import pytest

from helpers import ACCEPTANCE_LINES, FIG1, FIG2, FIG3, FIG4, make_game


@pytest.fixture
def fig1():
    return make_game(**FIG1)


@pytest.fixture
def fig2():
    return make_game(**FIG2)


@pytest.fixture
def fig3():
    return make_game(**FIG3)


@pytest.fixture
def fig4():
    return make_game(**FIG4)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda l: int(l.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
