"""Shared fixtures: small-graph corpora and the acceptance summary hook."""

import pytest

import wlpower as wl

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def acceptance_log():
    """Accumulates one human-readable pass/fail line per criterion."""
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def classes4():
    return list(wl.connected_classes(4))


@pytest.fixture(scope="session")
def classes5():
    return list(wl.connected_classes(5))


@pytest.fixture(scope="session")
def classes6():
    return list(wl.connected_classes(6))


@pytest.fixture(scope="session")
def c6():
    return wl.cycle_graph(6)


@pytest.fixture(scope="session")
def two_c3():
    return wl.disjoint_union(wl.cycle_graph(3), wl.cycle_graph(3))
