import numpy as np
import pytest

from twonorm import SpaceSpec, build_space, gram_pair_from_matrices
from twonorm.sampling import SETUP_TRIAL, random_reference, random_stiefel, rng_for_trial


@pytest.fixture(scope="session")
def g():
    """Default periodic grid space: 16 points, spacing 0.25."""
    return build_space(SpaceSpec(domain_dim=1, grid_points=16, spacing=0.25))


@pytest.fixture(scope="session")
def g_small():
    """Two-point space with distinct weak and strong products."""
    return build_space(SpaceSpec(domain_dim=1, grid_points=2, spacing=1.0))


@pytest.fixture(scope="session")
def g_flat():
    """Two-dimensional space where both products are the plain dot product."""
    return gram_pair_from_matrices(np.eye(2), np.eye(2))


@pytest.fixture(scope="session")
def ref(g):
    return random_reference(rng_for_trial(42, SETUP_TRIAL), g, 2)


@pytest.fixture(scope="session")
def V(g, ref):
    return random_stiefel(rng_for_trial(42, SETUP_TRIAL), ref, scale=0.4)


@pytest.fixture
def rng():
    return rng_for_trial(42, 0)
