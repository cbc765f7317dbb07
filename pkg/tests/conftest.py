import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from framelab import constructors as fc


@pytest.fixture
def mb():
    return fc.mercedes_benz()


@pytest.fixture
def p42():
    return fc.paper_4_2()


@pytest.fixture
def harmonic73():
    return fc.harmonic_frame(7, (1, 2, 4))


@pytest.fixture
def onb53():
    return fc.onb_padded(5, 3)


@pytest.fixture
def rand_parseval():
    """Factory for seeded random Parseval frames."""
    return lambda m, n, seed=0, field="real": fc.random_parseval(m, n, seed, field)


def assert_close(a, b, tol):
    assert abs(np.asarray(a) - np.asarray(b)).max() <= tol, (a, b)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod and mod.LINES:
        terminalreporter.section("acceptance criteria")
        for line in mod.LINES:
            terminalreporter.write_line(line)
