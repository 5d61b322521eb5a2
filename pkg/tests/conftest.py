import math

import pytest

import delaydesign as dd

OMEGA = 2.0 * math.pi


@pytest.fixture(scope="session")
def oscillator_design():
    """Delayed-gain design for the undamped oscillator plant, delay 0.12."""
    results = dd.solve_control_mid([OMEGA**2, 0.0], 2, 0, dd.DelayGiven(0.12))
    return results[0]


@pytest.fixture(scope="session")
def oscillator_q(oscillator_design):
    return oscillator_design.quasipolynomial


@pytest.fixture(scope="session")
def oscillator_roots_small(oscillator_q):
    """Roots of the designed oscillator in a window around the placed root."""
    return dd.find_roots(oscillator_q, dd.ComplexRectangle(-5.0, 1.0, -3.0, 3.0))
