from typing import Callable

import numpy as np
import pytest

from dgdflow.dynamics import PowerWeight, Schedule
from dgdflow.graph import graph_from_preset
from dgdflow.manifold import (
    LinearizedSystem,
    SaddleProblem,
    critical_path,
    linearize,
)
from dgdflow.objective import make_preset
from dgdflow.objective.models import QuadraticForm


def _system(h, q, weight, target, times, radius) -> LinearizedSystem:
    betas = np.geomspace(weight.value(times[0]), weight.value(times[-1]), 200)
    path = critical_path(h, q, target, betas)
    return linearize(path, weight, times, radius=radius)


@pytest.fixture()
def linear_system() -> LinearizedSystem:
    """ẏ = −diag(2, −1) y: constant frames and no nonlinearity."""
    h = QuadraticForm(np.diag([2.0, -1.0]))
    times = np.linspace(0.0, 5.0, 501)
    return _system(h, np.zeros((2, 2)), PowerWeight(), np.zeros(2), times, 0.3)


@pytest.fixture()
def drifting_system() -> LinearizedSystem:
    """Two scalar agents whose penalized critical point moves with β."""
    h = QuadraticForm(np.diag([1.0, -3.0]), np.array([0.1, 0.1]))
    q = np.array([[1.0, -1.0], [-1.0, 1.0]])
    times = np.linspace(8.0, 18.0, 2001)
    return _system(h, q, PowerWeight(), np.array([0.1, 0.1]), times, 0.1)


@pytest.fixture()
def saddle_problem() -> SaddleProblem:
    return SaddleProblem.from_dgd(
        graph_from_preset("path", 2),
        make_preset("quartic_saddle", 2, 2),
        Schedule(tau_alpha=0.8, tau_beta=0.3),
        np.zeros(2),
    )


@pytest.fixture()
def quartic_on_grid(saddle_problem) -> Callable[[int], LinearizedSystem]:
    def build(points: int) -> LinearizedSystem:
        return _system(
            saddle_problem.h,
            saddle_problem.q,
            saddle_problem.weight,
            saddle_problem.saddle,
            np.linspace(4.0, 14.0, points),
            0.1,
        )

    return build


@pytest.fixture()
def quartic_system(quartic_on_grid) -> LinearizedSystem:
    return quartic_on_grid(2001)
