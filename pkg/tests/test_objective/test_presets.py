import math

import numpy as np
import pytest

from dgdflow.exceptions import NotACriticalPoint, ObjectiveError, UnknownPreset
from dgdflow.objective import (
    CriticalKind,
    QuadraticForm,
    classify_hessian,
    classify_matrix,
    make_preset,
)
from dgdflow.objective.presets import zero_sum_tilts


class TestQuarticSaddle:
    def test_tilts_cancel_exactly(self, quartic4):
        tilts = np.array([f.tilt for f in quartic4.locals])

        assert np.any(tilts != 0.0)
        np.testing.assert_array_equal(tilts.sum(axis=0), 0.0)

    def test_sum_is_the_homogeneous_quartic(self, quartic4, sample_points):
        for a1, a2 in sample_points:
            expected = a1**2 - a2**2 + a2**4 / 4.0
            assert quartic4.eval_sum(np.array([a1, a2])) == pytest.approx(
                expected, abs=1e-12
            )

    def test_critical_points(self, quartic4):
        saddle = classify_hessian(quartic4, np.zeros(2))
        minimum = classify_hessian(quartic4, np.array([0.0, math.sqrt(2.0)]))

        assert saddle.kind == CriticalKind.SADDLE
        assert str(saddle) == "saddle(1)"
        assert minimum.kind == CriticalKind.MINIMUM

    def test_not_a_critical_point(self, quartic4):
        with pytest.raises(NotACriticalPoint):
            classify_hessian(quartic4, np.array([1.0, 0.0]))

    def test_defined_only_in_the_plane(self):
        with pytest.raises(ObjectiveError):
            make_preset("quartic_saddle", 3, 3)


class TestPresetFactory:
    def test_unknown_preset(self):
        with pytest.raises(UnknownPreset):
            make_preset("rosenbrock", 2, 2)

    def test_rejects_empty_network(self):
        with pytest.raises(ObjectiveError):
            make_preset("quadratic_convex", 0, 2)

    def test_quadratic_centers(self):
        obj = make_preset("quadratic_convex", 2, 1, centers=[[-1.0], [3.0]])

        np.testing.assert_allclose(obj.sum_gradient(np.array([1.0])), [0.0])
        assert classify_hessian(obj, np.array([1.0])).kind == CriticalKind.MINIMUM

    def test_quadratic_centers_shape(self):
        with pytest.raises(ObjectiveError, match="centers"):
            make_preset("quadratic_convex", 3, 2, centers=[[0.0, 0.0]])

    def test_random_quartic_is_reproducible(self):
        first = make_preset("random_quartic", 3, 2, heterogeneity_seed=5)
        second = make_preset("random_quartic", 3, 2, heterogeneity_seed=5)
        a = np.array([0.4, -1.1])

        assert first.eval_sum(a) == second.eval_sum(a)

    def test_zero_sum_tilts_single_agent(self):
        tilts = zero_sum_tilts(np.random.default_rng(0), 1, 2, 0.1)

        np.testing.assert_array_equal(tilts, 0.0)


class TestStackedObjective:
    def test_stacked_gradient_is_blockwise(self, quartic4):
        x = np.random.default_rng(3).normal(size=quartic4.stacked_dimension)
        blocks = x.reshape(4, 2)

        expected = np.concatenate(
            [f.gradient(b) for f, b in zip(quartic4.locals, blocks)]
        )
        np.testing.assert_allclose(quartic4.stacked_gradient(x), expected)
        assert quartic4.stacked_hessian(x).shape == (8, 8)

    def test_embed_repeats_the_point(self, quartic4):
        np.testing.assert_array_equal(
            quartic4.embed(np.array([1.0, 2.0])), [1, 2, 1, 2, 1, 2, 1, 2]
        )

    def test_stacked_value_at_consensus(self, quartic4):
        a = np.array([0.5, -0.7])

        assert quartic4.stacked().value(quartic4.embed(a)) == pytest.approx(
            quartic4.eval_sum(a)
        )


class TestClassification:
    def test_degenerate(self):
        assert classify_matrix(np.diag([1.0, 0.0])).kind == CriticalKind.DEGENERATE

    def test_maximum(self):
        assert classify_matrix(-np.eye(3)).kind == CriticalKind.MAXIMUM

    def test_quadratic_form_must_be_symmetric(self):
        with pytest.raises(ObjectiveError):
            QuadraticForm(np.array([[1.0, 2.0], [0.0, 1.0]]))

    def test_quadratic_form_derivatives(self):
        h = QuadraticForm(np.diag([2.0, -1.0]), np.array([1.0, 0.0]))
        x = np.array([1.0, 2.0])

        assert h.value(x) == pytest.approx(1.0 - 2.0 + 1.0)
        np.testing.assert_allclose(h.gradient(x), [3.0, -2.0])
