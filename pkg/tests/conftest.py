import numpy as np
import pytest

from nscrit.grid import GridSpec


@pytest.fixture
def grid16():
    return GridSpec.cubic(16)


@pytest.fixture
def grid32():
    return GridSpec.cubic(32)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
