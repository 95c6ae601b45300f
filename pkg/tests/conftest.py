import numpy as np
import pytest

from ostab.grid import build_grid
from ostab.profiles import poiseuille


@pytest.fixture(scope="session")
def g64():
    return build_grid(64)


@pytest.fixture(scope="session")
def g16():
    return build_grid(16)


@pytest.fixture(scope="session")
def pois():
    return poiseuille()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE = {}


@pytest.fixture
def criterion():
    """Record one acceptance verdict: ``criterion(k, passed, detail)``."""
    def record(k, passed, detail):
        ACCEPTANCE[k] = (bool(passed), detail)
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if passed else 'FAIL'}  {detail}")
