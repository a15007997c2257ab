import numpy as np
import pytest

from qrf.grids import Grid1D


@pytest.fixture
def rng():
    return np.random.default_rng(20240911)


@pytest.fixture(scope="session")
def grid128():
    return Grid1D(128, 20.0)


@pytest.fixture(scope="session")
def grid64():
    return Grid1D(64, 16.0)


@pytest.fixture(scope="session")
def grid16():
    return Grid1D(16, 10.0)
