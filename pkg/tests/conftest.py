import pytest

from mmot_euler.grid import flip_map, three_point_grid


@pytest.fixture
def three():
    return three_point_grid()


@pytest.fixture
def flip3(three):
    return flip_map(three)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import REPORT
    except ImportError:
        return
    if REPORT:
        terminalreporter.section("acceptance criteria")
        for line in REPORT:
            terminalreporter.write_line(line)
