import numpy as np
import pytest

from biofilm1d import GrowthModel, Model, PhysicalParams, RateModel


@pytest.fixture(scope="session")
def fig1():
    return Model(PhysicalParams(), RateModel.tanh(2.0), GrowthModel.affine(1.0, 0.5))


@pytest.fixture(scope="session")
def linear_model():
    return Model(PhysicalParams(), RateModel.linear(1.0), GrowthModel.affine(1.0, 0.25))


@pytest.fixture(scope="session")
def washout():
    """``b > r(c*)``: the biofilm can only shrink."""
    return Model(PhysicalParams(), RateModel.tanh(2.0), GrowthModel.affine(1.0, 2.0))


def tabulated_rate():
    s = np.linspace(0.0, 3.0, 61)
    return RateModel.tabulated(s, 1.0 - np.exp(-3.0 * s))


_CRITERIA = {}


@pytest.fixture
def criterion():
    """Record one acceptance line: ``criterion(number, title, passed, detail)``."""

    def record(number, title, passed, detail):
        line = f"criterion {number:>2} {'PASS' if passed else 'FAIL'}  {title}: {detail}"
        _CRITERIA[number] = line
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for number in sorted(_CRITERIA):
            terminalreporter.write_line(_CRITERIA[number])
