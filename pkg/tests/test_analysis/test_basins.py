import math

import numpy as np
import pytest

from dgdflow.analysis import TrialOutcome, find_critical_points, monte_carlo_basins
from dgdflow.objective import CriticalKind


class TestSimulationSetup:
    def test_initial_states(self, basin_setup):
        states = basin_setup.sample_initial_states(np.random.default_rng(0), 5)

        assert states.shape == (5, 8)
        assert np.all((states >= -2.0) & (states <= 2.0))

    def test_simulation_reaches_the_horizon(self, basin_setup):
        x0 = basin_setup.sample_initial_states(np.random.default_rng(0), 1)[0]

        traj = basin_setup.simulate(x0, horizon=5.0)

        assert traj.final_time == pytest.approx(5.0)


class TestMonteCarloBasins:
    def test_generic_runs_avoid_the_saddle(self, basin_setup, atlas):
        outcomes = []

        stats = monte_carlo_basins(
            basin_setup, atlas, 24, rng_seed=7, jobs=4, on_trial=outcomes.append
        )

        assert stats.trials == 24
        assert stats.count(atlas, CriticalKind.SADDLE) == 0
        assert stats.count(atlas, CriticalKind.MINIMUM) == 24
        assert stats.unresolved == 0
        assert all(o.final_gradient < 1e-4 for o in outcomes)
        assert [o.index for o in outcomes] == list(range(24))
        assert all(isinstance(o, TrialOutcome) for o in outcomes)

    def test_worker_count_does_not_change_the_result(self, basin_setup, atlas):
        basin_setup = type(basin_setup)(
            graph=basin_setup.graph,
            objective=basin_setup.objective,
            schedule=basin_setup.schedule,
            options=basin_setup.options,
            horizon=50.0,
        )

        serial = monte_carlo_basins(basin_setup, atlas, 6, rng_seed=3, jobs=1)
        parallel = monte_carlo_basins(basin_setup, atlas, 6, rng_seed=3, jobs=3)

        assert serial.outcomes == parallel.outcomes
        assert serial.hits == parallel.hits

    def test_needs_a_trial(self, basin_setup, atlas):
        with pytest.raises(ValueError):
            monte_carlo_basins(basin_setup, atlas, 0, rng_seed=0)

    @pytest.mark.slow
    def test_acceptance_scale(self, basin_setup, atlas):
        stats = monte_carlo_basins(basin_setup, atlas, 200, rng_seed=7, jobs=8)

        assert stats.count(atlas, CriticalKind.SADDLE) == 0
        assert stats.unresolved <= 2
