import math

import pytest

from polarfermi.core import PhysParams
from polarfermi.toy1d import gap_integral_1d


@pytest.fixture(scope="session")
def balanced_coupling_1d():
    """Contact coupling tuned so the balanced 1-D critical temperature is 1e-3.

    At delta_mu = 0 the critical temperature solves gap_integral_1d(0) = 1/g,
    so inverting the integral at T = 1e-3 pins T_c there exactly.
    """
    params = PhysParams(mu_bar=1.0, delta_mu=0.0, T=1e-3)
    return 1.0 / gap_integral_1d(0.0, params)


@pytest.fixture(scope="session")
def tc_1d():
    return 1e-3


ACOSH2 = math.acosh(2.0)
