import pytest

from dgdflow.scenario import Scenario, loads_scenario

SMALL = """
kind = "simulate"
seed = 3

[graph]
preset = "path"
nodes = 2

[objective]
preset = "quartic_saddle"
dimension = 2

[schedule]
tau_alpha = 0.8
tau_beta = 0.3

[init]
horizon = 20.0

[basins]
trials = 4
atlas_seeds = 16

[manifold]
samples = 2
check_consistency = false

[probe]
stable_offset = [0.0, 0.05, 0.0, -0.05]
tol_s = 1e-3
"""


@pytest.fixture()
def small_toml() -> str:
    return SMALL


@pytest.fixture()
def small_scenario(tmp_path) -> Scenario:
    scenario = loads_scenario(SMALL)
    scenario.output = str(tmp_path / "out")
    return scenario
