import dataclasses

import numpy as np
import pytest

from dgdflow.objective import PRESETS, make_preset
from dgdflow.objective.oracles import (
    central_gradient,
    gradient_check,
    hessian_check,
)


@dataclasses.dataclass(frozen=True)
class WrongGradient:
    dimension: int = 2

    def value(self, a):
        return float(a @ a)

    def gradient(self, a):
        return 3.0 * a

    def hessian(self, a):
        return 2.0 * np.eye(2)


class TestOracles:
    @pytest.mark.parametrize("name", sorted(PRESETS))
    def test_presets_pass(self, name, sample_points):
        obj = make_preset(name, 3, 2, heterogeneity_seed=2)

        for f in obj.locals:
            gradient = gradient_check(f, sample_points)
            hessian = hessian_check(f, sample_points)
            assert gradient.points == 50
            assert gradient.passed(1e-5)
            assert hessian.passed(1e-5)
            assert hessian.max_asymmetry == 0.0

    def test_wrong_gradient_fails(self, sample_points):
        report = gradient_check(WrongGradient(), sample_points)

        assert not report.passed(1e-5)

    def test_central_gradient_of_a_quadratic(self):
        approx = central_gradient(lambda a: float(a @ a), np.array([1.0, -2.0]))

        np.testing.assert_allclose(approx, [2.0, -4.0], atol=1e-8)
