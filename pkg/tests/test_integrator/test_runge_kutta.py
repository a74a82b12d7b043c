import math

import numpy as np
import pytest

from dgdflow.dynamics import FlowField
from dgdflow.exceptions import IntegratorError
from dgdflow.integrator import (
    IntegratorMethod,
    IntegratorOptions,
    TerminationKind,
    adaptive_accuracy,
    integrate,
    integrate_until,
    order_check,
)


def forced_solution(x0: np.ndarray):
    return lambda t: 0.5 * (np.cos(t) + np.sin(t)) + (x0 - 0.5) * np.exp(-t)


class TestAdaptive:
    def test_exponential_decay(self, decay, x0):
        opts = IntegratorOptions(abs_tol=1e-10, rel_tol=1e-10)

        traj = integrate(decay, x0, 0.0, 5.0, opts)

        assert traj.termination.kind == TerminationKind.HORIZON_REACHED
        assert traj.final_time == pytest.approx(5.0)
        np.testing.assert_allclose(traj.final_state, x0 * math.exp(-5.0), atol=1e-9)
        assert traj.field_evaluations > traj.accepted_steps

    def test_requested_tolerance_is_met(self, forced, x0):
        ratio = adaptive_accuracy(
            forced, x0, 0.0, 10.0, 1e-8, exact=forced_solution(x0)
        )

        assert ratio < 100.0

    def test_reference_run_without_exact_solution(self, forced, x0):
        assert adaptive_accuracy(forced, x0, 0.0, 3.0, 1e-6) < 100.0

    def test_dense_output(self, forced, x0):
        opts = IntegratorOptions(abs_tol=1e-10, rel_tol=1e-10, dense_output=True)
        exact = forced_solution(x0)

        traj = integrate(forced, x0, 0.0, 4.0, opts)

        for t in (0.05, 1.3, 2.71, 3.999):
            np.testing.assert_allclose(traj.interpolate(t), exact(t), atol=1e-7)

    def test_dense_output_must_be_requested(self, decay, x0):
        traj = integrate(decay, x0, 0.0, 1.0)

        with pytest.raises(IntegratorError):
            traj.interpolate(0.5)


class TestFixedStep:
    def test_observed_order(self, forced, x0):
        report = order_check(forced, forced_solution(x0), 0.0, 2.0)

        assert 3.8 <= report.slope <= 4.2
        assert report.errors[0] > report.errors[-1]

    def test_decimation_keeps_the_last_state(self, decay, x0):
        opts = IntegratorOptions(method="rk4", h_init=0.1, stride=3)

        traj = integrate(decay, x0, 0.0, 1.0, opts)

        assert opts.method == IntegratorMethod.RK4_FIXED
        assert traj.accepted_steps == 10
        np.testing.assert_allclose(traj.times, [0.0, 0.3, 0.6, 0.9, 1.0])

    def test_hermite_dense_output(self, decay, x0):
        opts = IntegratorOptions(method="rk4", h_init=0.01, dense_output=True)

        traj = integrate(decay, x0, 0.0, 1.0, opts)

        np.testing.assert_allclose(
            traj.interpolate(0.555), x0 * math.exp(-0.555), atol=1e-7
        )


class TestTermination:
    def test_box_exit_is_data(self):
        field = FlowField(lambda t, x: np.ones(1), 1, box_radius=1.0)

        traj = integrate(field, np.zeros(1), 0.0, 5.0)

        assert traj.termination.kind == TerminationKind.BOX_EXIT
        assert traj.final_time < 5.0
        assert abs(traj.final_state[0]) <= 1.0

    def test_stiff_decay_inside_the_box_is_not_an_exit(self):
        field = FlowField(lambda t, x: -1000.0 * x, 1, box_radius=10.0)

        traj = integrate(field, np.array([9.0]), 0.0, 1.0)

        assert traj.termination.kind == TerminationKind.HORIZON_REACHED
        assert traj.final_time == pytest.approx(1.0)
        assert abs(traj.final_state[0]) < 1e-6
        assert traj.rejected_steps > 0
        assert np.all(np.abs(traj.states) <= 10.0)

    def test_growth_exits_after_the_last_state_inside(self):
        field = FlowField(lambda t, x: x, 1, box_radius=10.0)

        traj = integrate(field, np.array([1.0]), 0.0, 5.0)

        assert traj.termination.kind == TerminationKind.BOX_EXIT
        assert traj.final_time < math.log(10.0)
        assert traj.final_state[0] <= 10.0
        assert traj.final_state[0] == pytest.approx(math.exp(traj.final_time))

    def test_fixed_step_checks_accepted_states(self):
        field = FlowField(lambda t, x: -1000.0 * x, 1, box_radius=10.0)
        opts = IntegratorOptions(
            method=IntegratorMethod.RK4_FIXED, h_init=1e-3, h_min=1e-3, h_max=1e-3
        )

        traj = integrate(field, np.array([9.0]), 0.0, 0.1, opts)

        assert traj.termination.kind == TerminationKind.HORIZON_REACHED

    def test_initial_state_outside_the_box(self):
        field = FlowField(lambda t, x: -x, 1, box_radius=1.0)

        traj = integrate(field, np.array([2.0]), 0.0, 1.0)

        assert traj.termination.kind == TerminationKind.BOX_EXIT
        assert traj.termination.t == 0.0
        assert len(traj) == 1

    def test_predicate(self, decay):
        opts = IntegratorOptions(abs_tol=1e-10, rel_tol=1e-10, h_max=0.01)

        traj = integrate_until(
            decay, np.array([1.0]), 0.0, lambda t, x: x[0] < 0.5, opts, name="half"
        )

        assert traj.termination.kind == TerminationKind.EVENT_FIRED
        assert str(traj.termination) == "event_fired(half)"
        assert math.log(2.0) <= traj.final_time <= math.log(2.0) + 0.01

    def test_step_budget(self, decay, x0):
        opts = IntegratorOptions(method="rk4", h_init=0.01, max_steps=5)

        traj = integrate(decay, x0, 0.0, 1.0, opts)

        assert traj.termination.kind == TerminationKind.STEP_FAILURE
        assert traj.accepted_steps == 5

    def test_empty_interval(self, decay, x0):
        with pytest.raises(IntegratorError):
            integrate(decay, x0, 1.0, 1.0)

    def test_non_finite_initial_state(self, decay):
        with pytest.raises(IntegratorError):
            integrate(decay, np.array([np.nan]), 0.0, 1.0)


class TestOptions:
    @pytest.mark.parametrize(
        "kwargs",
        [
            {"abs_tol": 0.0},
            {"h_min": 1.0, "h_init": 0.1},
            {"stride": 0},
            {"method": "euler"},
        ],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(IntegratorError):
            IntegratorOptions(**kwargs)

    def test_reclocked_trajectory(self, decay, x0):
        traj = integrate(decay, x0, 0.0, 1.0)

        doubled = traj.reclocked(lambda t: 2.0 * t)

        np.testing.assert_allclose(doubled.times, 2.0 * traj.times)
        assert doubled.termination.t == pytest.approx(2.0)
        assert doubled.states is traj.states
