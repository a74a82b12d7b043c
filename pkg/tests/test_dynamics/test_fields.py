import numpy as np
import pytest

from dgdflow.dynamics import (
    Clock,
    FieldForm,
    PowerWeight,
    consensus_projection,
    dgd_field,
    penalized_field,
    reclocked_field,
    time_change,
)
from dgdflow.exceptions import ValidityBoxError
from dgdflow.graph import graph_from_preset
from dgdflow.objective import QuadraticForm


@pytest.fixture()
def state() -> np.ndarray:
    return np.random.default_rng(5).uniform(-2.0, 2.0, size=8)


class TestDgdField:
    def test_forms_agree(self, ring4, quartic4, schedule, state):
        kronecker = dgd_field(ring4, quartic4, schedule, FieldForm.KRONECKER)
        agents = dgd_field(ring4, quartic4, schedule, "agents")

        for t in (0.0, 3.0, 400.0):
            np.testing.assert_allclose(
                kronecker(t, state), agents(t, state), rtol=0, atol=1e-12
            )

    def test_consensus_term_vanishes_on_consensus(self, ring4, quartic4, schedule):
        field = dgd_field(ring4, quartic4, schedule)
        a = np.array([0.2, -0.4])
        alpha, _ = schedule.evaluate(2.0)

        expected = -alpha * quartic4.stacked_gradient(quartic4.embed(a))
        np.testing.assert_allclose(field(2.0, quartic4.embed(a)), expected)

    def test_graph_and_objective_must_agree(self, quartic4, schedule):
        with pytest.raises(ValueError):
            dgd_field(graph_from_preset("ring", 3), quartic4, schedule)

    def test_box_exit(self, ring4, quartic4, schedule):
        field = dgd_field(ring4, quartic4, schedule, box_radius=1.0)

        with pytest.raises(ValidityBoxError) as info:
            field(0.0, np.full(8, 1.5))
        assert info.value.radius == 1.0

    def test_unbounded_box(self, ring4, quartic4, schedule):
        field = dgd_field(ring4, quartic4, schedule, box_radius=None)

        assert field.inside(np.full(8, 1e6))


class TestReclockedField:
    def test_beta_clock(self, ring4, quartic4, schedule, state):
        tc = time_change(schedule, Clock.BETA)
        original = dgd_field(ring4, quartic4, schedule)
        reclocked = reclocked_field(ring4, quartic4, schedule, Clock.BETA)
        t = 6.0
        tau = tc.inverse(t)

        np.testing.assert_allclose(
            reclocked(t, state),
            original(tau, state) / schedule.beta(tau),
            rtol=1e-10,
        )

    def test_alpha_clock(self, ring4, quartic4, schedule, state):
        tc = time_change(schedule, Clock.ALPHA)
        original = dgd_field(ring4, quartic4, schedule)
        reclocked = reclocked_field(ring4, quartic4, schedule, "alpha")
        t = 6.0
        tau = tc.inverse(t)

        np.testing.assert_allclose(
            reclocked(t, state),
            original(tau, state) / schedule.alpha(tau),
            rtol=1e-10,
        )

    def test_original_clock(self, ring4, quartic4, schedule, state):
        reclocked = reclocked_field(ring4, quartic4, schedule, Clock.ORIGINAL)

        np.testing.assert_allclose(
            reclocked(1.0, state), dgd_field(ring4, quartic4, schedule)(1.0, state)
        )


class TestPenalizedField:
    def test_linear_flow(self):
        h = QuadraticForm(np.diag([2.0, -1.0]))
        q = np.array([[1.0, -1.0], [-1.0, 1.0]])
        field = penalized_field(h, q, PowerWeight(1.0, 0.0))
        x = np.array([1.0, 0.5])

        np.testing.assert_allclose(field(0.0, x), -h.gradient(x) - q @ x)

    def test_rejects_indefinite_penalty(self):
        h = QuadraticForm(np.eye(2))

        with pytest.raises(ValueError, match="semidefinite"):
            penalized_field(h, -np.eye(2), PowerWeight())

    def test_rejects_wrong_shape(self):
        with pytest.raises(ValueError):
            penalized_field(QuadraticForm(np.eye(2)), np.eye(3), PowerWeight())


class TestConsensusProjection:
    def test_split(self, state):
        avg, perp = consensus_projection(state, 4, 2)

        np.testing.assert_allclose(avg, state.reshape(4, 2).mean(axis=0))
        np.testing.assert_allclose(perp.reshape(4, 2).sum(axis=0), 0.0, atol=1e-14)
        np.testing.assert_allclose(np.tile(avg, 4) + perp, state)

    def test_stack_of_states(self, state):
        states = np.vstack([state, 2.0 * state])

        avg, perp = consensus_projection(states, 4, 2)

        assert avg.shape == (2, 2)
        assert perp.shape == (2, 8)
        np.testing.assert_allclose(avg[1], 2.0 * avg[0])
