import numpy as np
import pytest

from dgdflow.constants import DELTA_SADDLE
from dgdflow.manifold import (
    build_chart,
    chart_consistency,
    sample_stable_coordinates,
    unstable_growth,
)


@pytest.fixture()
def samples(quartic_system) -> np.ndarray:
    rng = np.random.default_rng(5)
    return sample_stable_coordinates(quartic_system.k, quartic_system.radius, 3, rng)


class TestBuildChart:
    def test_origin_maps_to_the_saddle(self, quartic_system, samples):
        chart = build_chart(quartic_system, samples)
        assert chart.base_time == pytest.approx(4.0)
        assert chart.k == 3
        assert chart.points[0] == pytest.approx(np.zeros(4), abs=1e-12)

    def test_unstable_graph_vanishes_on_the_invariant_subspace(
        self, quartic_system, samples
    ):
        chart = build_chart(quartic_system, samples)
        assert chart.psi_values.shape == (3, 1)
        assert np.max(np.abs(chart.psi_values)) < 1e-9
        assert np.all(chart.contraction_ratios < 1.0)

    def test_points_keep_the_agents_antisymmetric(self, quartic_system, samples):
        chart = build_chart(quartic_system, samples)
        # consensus in the second coordinate is the unstable direction
        assert chart.points[:, 1] + chart.points[:, 3] == pytest.approx(
            np.zeros(3), abs=1e-9
        )

    def test_parallel_build_matches_serial(self, quartic_system, samples):
        serial = build_chart(quartic_system, samples, jobs=1)
        parallel = build_chart(quartic_system, samples, jobs=3)
        assert np.array_equal(serial.points, parallel.points)

    def test_to_state_inverts_the_frame(self, quartic_system, samples):
        chart = build_chart(quartic_system, samples)
        z = np.concatenate([samples[1], chart.psi_values[1]])
        assert chart.to_state(z) == pytest.approx(chart.points[1])


class TestChartConsistency:
    @pytest.mark.slow
    def test_chart_points_stay_and_pushed_points_leave(
        self, saddle_problem, quartic_system, samples
    ):
        chart = build_chart(quartic_system, samples[:2])
        checks = chart_consistency(saddle_problem, quartic_system, chart)
        assert len(checks) == 2
        for check in checks:
            assert check.max_distance < quartic_system.radius
            assert check.perturbed_final_distance > DELTA_SADDLE


class TestUnstableGrowth:
    def test_linear_growth_over_the_horizon(self, linear_system):
        assert unstable_growth(linear_system) == pytest.approx(np.exp(5.0))

    def test_zero_coefficient(self, linear_system):
        assert unstable_growth(linear_system, coefficient=0.0) == 0.0
