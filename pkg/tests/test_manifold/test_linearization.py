import numpy as np
import pytest

from dgdflow.dynamics import PowerWeight
from dgdflow.exceptions import ContractionConstantsError, ManifoldError
from dgdflow.manifold import (
    calibrate,
    critical_path,
    estimate_k,
    linearize,
    transition_factor,
)
from dgdflow.objective.models import QuadraticForm


class _ConstantWeight:
    def value(self, t: float) -> float:
        return 1.5

    def derivative(self, t: float) -> float:
        return 0.0


class TestCriticalPath:
    def test_tracks_the_penalized_critical_point(self, drifting_system):
        path = drifting_system.path
        for beta, g in zip(path.beta_grid, path.g_values):
            residual = path.h.gradient(g) + beta * (path.q @ g)
            assert np.linalg.norm(residual) < 1e-9

    def test_approaches_the_consensus_point(self, drifting_system):
        distances = drifting_system.path.distances
        assert distances[-1] < distances[0]

    def test_derivative_matches_finite_differences(self, drifting_system):
        path = drifting_system.path
        g_low, _ = path.at(4.0 - 1e-5)
        g_high, _ = path.at(4.0 + 1e-5)
        _, g_prime = path.at(4.0)
        assert (g_high - g_low) / 2e-5 == pytest.approx(g_prime, rel=1e-4, abs=1e-9)

    @pytest.mark.parametrize("grid", [[1.0], [2.0, 1.0], [0.0, 1.0]])
    def test_rejects_bad_beta_grids(self, grid):
        h = QuadraticForm(np.diag([2.0, -1.0]))
        with pytest.raises(ManifoldError):
            critical_path(h, np.zeros((2, 2)), np.zeros(2), np.array(grid))


class TestLinearize:
    def test_splitting_of_a_constant_saddle(self, linear_system):
        assert linear_system.k == 1
        assert linear_system.p == 1
        assert linear_system.eigenvalues[0] == pytest.approx([-2.0, 1.0])
        assert linear_system.sigma == pytest.approx(0.5)
        assert linear_system.alpha_rate == pytest.approx(0.9 * 1.5)
        assert linear_system.K == pytest.approx(1.0)

    def test_quartic_saddle_has_one_unstable_direction(self, quartic_system):
        assert quartic_system.dimension == 4
        assert quartic_system.k == 3
        assert np.all(quartic_system.eigenvalues[:, :3] < 0)
        assert np.all(quartic_system.eigenvalues[:, 3] > 0)

    def test_frames_stay_orthonormal(self, drifting_system):
        for frame in drifting_system.frames[::100]:
            assert frame @ frame.T == pytest.approx(np.eye(2), abs=1e-12)

    def test_needs_an_increasing_grid(self, linear_system):
        with pytest.raises(ManifoldError):
            linearize(linear_system.path, PowerWeight(), np.array([0.0, 1.0]))

    def test_needs_both_splittings(self):
        h = QuadraticForm(np.eye(2))
        path = critical_path(h, np.zeros((2, 2)), np.zeros(2), np.array([1.0, 2.0]))
        with pytest.raises(ManifoldError, match="stable and unstable"):
            linearize(path, _ConstantWeight(), np.linspace(0.0, 1.0, 11))

    def test_restrict_keeps_the_window(self, linear_system):
        window = linear_system.restrict(1.0, 3.0)
        assert window.start == pytest.approx(1.0)
        assert window.horizon == pytest.approx(2.0)
        assert window.cumulative[0] == pytest.approx([0.0, 0.0])

    def test_node_must_be_on_the_grid(self, linear_system):
        assert linear_system.node(1.0) == 100
        with pytest.raises(ManifoldError):
            linear_system.node(1.0005)


class TestEstimateK:
    def test_monotone_branches_give_one(self):
        times = np.linspace(0.0, 1.0, 11)
        cumulative = np.column_stack([-2.0 * times, times])
        assert estimate_k(times, cumulative, 1, 1.35, 0.5) == pytest.approx(1.0)

    def test_a_bump_in_the_stable_rate_raises_k(self):
        times = np.linspace(0.0, 2.0, 21)
        rate = np.where(times < 1.0, 1.0, -3.0)
        cumulative = np.column_stack(
            [np.concatenate([[0.0], np.cumsum(rate[:-1] * np.diff(times))]), times]
        )
        assert estimate_k(times, cumulative, 1, 0.5, 0.25) > np.exp(1.0)


class TestTransitionFactor:
    def test_stable_factor(self, linear_system):
        factor = transition_factor(linear_system, 1.0, 0.0, "stable")
        assert factor == pytest.approx(np.diag([np.exp(-2.0), 0.0]), abs=1e-12)

    def test_unstable_factor(self, linear_system):
        factor = transition_factor(linear_system, 0.0, 2.0, "unstable")
        assert factor == pytest.approx(np.diag([0.0, np.exp(-2.0)]), abs=1e-12)

    @pytest.mark.parametrize(
        "t2, t1, which",
        [
            (0.0, 1.0, "stable"),
            (1.0, 0.0, "unstable"),
            (1.0, 0.0, "center"),
            (6.0, 0.0, "stable"),
        ],
    )
    def test_rejects_bad_arguments(self, linear_system, t2, t1, which):
        with pytest.raises(ManifoldError):
            transition_factor(linear_system, t2, t1, which)


class TestCalibrate:
    def test_linear_system_has_no_nonlinearity(self, linear_system):
        assert linear_system.epsilon == pytest.approx(0.0, abs=1e-12)
        assert linear_system.contraction_bound == pytest.approx(0.0, abs=1e-11)

    def test_quartic_epsilon_is_small_on_the_ball(self, quartic_system):
        assert 0.0 < quartic_system.epsilon < quartic_system.sigma / 6.0
        assert quartic_system.contraction_bound < 1.0 / 3.0

    def test_rotating_frames_contribute(self, drifting_system):
        assert drifting_system.epsilon > 1e-3

    def test_large_ball_is_rejected(self, quartic_system):
        with pytest.raises(ContractionConstantsError):
            calibrate(quartic_system, 2.0)

    def test_radius_must_be_positive(self, linear_system):
        with pytest.raises(ManifoldError):
            calibrate(linear_system, 0.0)
