import numpy as np
import pytest

from dgdflow.objective import ObjectiveSet, make_preset


@pytest.fixture()
def quartic4() -> ObjectiveSet:
    return make_preset("quartic_saddle", 4, 2, heterogeneity_seed=7)


@pytest.fixture()
def sample_points() -> np.ndarray:
    return np.random.default_rng(11).uniform(-2.0, 2.0, size=(50, 2))
