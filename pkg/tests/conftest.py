"""Independent oracles shared by the test modules.

Nothing here imports the code paths it is used to check.
"""

import math

import numpy as np
import pytest
from scipy import integrate


def vandermonde_weights(offsets, order):
    """Finite-difference weights at 0 from the moment system sum w_k x_k^m = m! [m == order]."""
    x = np.asarray(offsets, dtype=float)
    V = np.vander(x, len(x), increasing=True).T
    rhs = np.zeros(len(x))
    rhs[order] = math.factorial(order)
    return np.linalg.solve(V, rhs)


def quad_s(g, a, x):
    """int_a^x 1/g by QUADPACK."""
    val, _ = integrate.quad(lambda s: 1.0 / float(g(s)), a, x, epsabs=0.0, epsrel=1e-13, limit=200)
    return val


def well_closed_form(x, a=-25.0, b=25.0):
    return 1.0 - 0.9 * np.exp(-((x / (b - a)) ** 2))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
