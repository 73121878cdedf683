import sys

import pytest

from primcoh.io import load_model


@pytest.fixture(scope="session")
def kt():
    return load_model("kt")


@pytest.fixture(scope="session")
def t4():
    return load_model("t4")


def seeds(n, base=0):
    return range(base, base + n)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[key])
