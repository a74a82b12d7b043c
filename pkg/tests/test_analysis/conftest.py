import dataclasses

import numpy as np
import pytest

from dgdflow.analysis import CriticalPointAtlas, SimulationSetup, find_critical_points
from dgdflow.dynamics import Schedule
from dgdflow.graph import Graph, graph_from_preset
from dgdflow.integrator import IntegratorOptions
from dgdflow.objective import ObjectiveSet, make_preset


@pytest.fixture()
def ring4() -> Graph:
    return graph_from_preset("ring", 4)


@pytest.fixture()
def quartic4() -> ObjectiveSet:
    return make_preset("quartic_saddle", 4, 2)


@pytest.fixture()
def atlas(quartic4) -> CriticalPointAtlas:
    return find_critical_points(quartic4, 2.5, 64, np.random.default_rng(0))


@pytest.fixture()
def basin_setup(ring4, quartic4) -> SimulationSetup:
    return SimulationSetup(
        graph=ring4,
        objective=quartic4,
        schedule=Schedule(tau_alpha=0.6, tau_beta=0.1),
        options=IntegratorOptions(abs_tol=1e-8, rel_tol=1e-8),
        horizon=1000.0,
    )


@pytest.fixture()
def heterogeneous_setup(basin_setup) -> SimulationSetup:
    return dataclasses.replace(
        basin_setup,
        objective=make_preset("quartic_saddle", 4, 2, heterogeneity_seed=7),
    )
