import numpy as np
import pytest

from ecrlab.data import crowley_hu


@pytest.fixture(scope="session")
def heart_data():
    return crowley_hu()


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)
