from functools import lru_cache

import pytest

from helpcore.ctbl import bundled_tables, load_table


@lru_cache(maxsize=None)
def table(name):
    return load_table(name)


@pytest.fixture(scope="session")
def get_table():
    return table


BUNDLED = bundled_tables()
SMALL = [t for t in BUNDLED if t != "J1"]


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS, line
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(RESULTS):
            terminalreporter.write_line(line(k))
