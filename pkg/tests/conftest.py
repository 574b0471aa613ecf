import numpy as np
import pytest

from opfeyn import drifted_pair, wiener_pair


@pytest.fixture(scope="session")
def wiener():
    return wiener_pair()


@pytest.fixture(scope="session")
def drifted():
    # a = 0.3 t, b = t + 0.5 t^2 on [0, 1]
    return drifted_pair(0.3, 0.5)


@pytest.fixture
def gen():
    return np.random.default_rng(20240817)
