import numpy as np
import pytest

from mdpconv.analysis import search_mdp
from mdpconv.codec import make_code
from mdpconv.gf import Field, default_field
from mdpconv.polymat import PolyMatrix

GF256 = default_field(8)


def searched(n, k, delta, seed=7):
    code = search_mdp(n, k, delta, GF256, attempts=1000, rng_seed=seed)
    assert code is not None
    return code


@pytest.fixture(scope="session")
def gf256():
    return GF256


@pytest.fixture(scope="session")
def gf8():
    return Field(3)


@pytest.fixture(scope="session")
def code211():
    return searched(2, 1, 1)


@pytest.fixture(scope="session")
def code212():
    return searched(2, 1, 2)


@pytest.fixture(scope="session")
def code311():
    return searched(3, 1, 1)


@pytest.fixture(scope="session")
def toy_code():
    """G = [1, 1+z]^T over GF(2^8): d_free 3, not MDP."""
    G = PolyMatrix.from_entries(GF256, [[[1]], [[1, 1]]])
    return make_code(G)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
