import pytest

from dgdflow.dynamics import Schedule
from dgdflow.graph import Graph, graph_from_preset
from dgdflow.objective import ObjectiveSet, make_preset


@pytest.fixture()
def schedule() -> Schedule:
    return Schedule(tau_alpha=0.8, tau_beta=0.3)


@pytest.fixture()
def ring4() -> Graph:
    return graph_from_preset("ring", 4)


@pytest.fixture()
def quartic4() -> ObjectiveSet:
    return make_preset("quartic_saddle", 4, 2, heterogeneity_seed=1)
