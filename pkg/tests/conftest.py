import math

import pytest
from hypothesis import settings

from secant_dynamics.dynamics import GOLDEN_QUADRUPLE, construct_period4
from secant_dynamics.poly import Polynomial, real_roots

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def cubic():
    return Polynomial([0.0, 6.0, -5.0, 1.0])


@pytest.fixture(scope="session")
def cubic_roots(cubic):
    return real_roots(cubic)


@pytest.fixture(scope="session")
def torus_cubic():
    """x^3/3 - 4x + 3, with critical points at +-2."""
    return Polynomial([3.0, -4.0, 0.0, 1.0 / 3.0])


@pytest.fixture(scope="session")
def pstar():
    return construct_period4(*GOLDEN_QUADRUPLE)


@pytest.fixture(scope="session")
def quad():
    return GOLDEN_QUADRUPLE


SQRT5 = math.sqrt(5.0)
