import numpy as np
import pytest

from bifour.lattice import make_lattice


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def lat64():
    return make_lattice(1, 64, 2 * np.pi)


@pytest.fixture
def lat2d():
    return make_lattice(2, 16, 2 * np.pi)
