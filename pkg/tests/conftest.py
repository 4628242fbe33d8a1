import numpy as np
import pytest

from winfree_sphere.influence import linear_cutoff_profile, quadratic_cutoff_profile


@pytest.fixture
def linear_profile():
    return linear_cutoff_profile()


@pytest.fixture
def quadratic_profile():
    return quadratic_cutoff_profile()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
