import dataclasses
import logging
from typing import Callable, Dict, Optional, Sequence

import numpy as np

from ..constants import DEFAULT_HETEROGENEITY_SCALE, TILT_QUANTUM, VALIDITY_BOX_RADIUS
from ..exceptions import ObjectiveError, UnknownPreset
from .models import ObjectiveSet

__all__ = (
    "QuarticSaddleLocal",
    "QuadraticLocal",
    "RandomQuarticLocal",
    "PRESETS",
    "make_preset",
    "zero_sum_tilts",
)

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True, eq=False)
class QuarticSaddleLocal:
    """weight * (a₁² − a₂² + a₂⁴/4) + tilt·a."""

    weight: float
    tilt: np.ndarray
    dimension: int = 2

    def value(self, a: np.ndarray) -> float:
        a1, a2 = a
        return float(
            self.weight * (a1**2 - a2**2 + a2**4 / 4.0) + self.tilt @ np.asarray(a)
        )

    def gradient(self, a: np.ndarray) -> np.ndarray:
        a1, a2 = a
        return self.weight * np.array([2.0 * a1, -2.0 * a2 + a2**3]) + self.tilt

    def hessian(self, a: np.ndarray) -> np.ndarray:
        _, a2 = a
        return self.weight * np.diag([2.0, -2.0 + 3.0 * a2**2])


@dataclasses.dataclass(frozen=True, eq=False)
class QuadraticLocal:
    """½‖a − center‖²."""

    center: np.ndarray

    @property
    def dimension(self) -> int:
        return len(self.center)

    def value(self, a: np.ndarray) -> float:
        diff = np.asarray(a, dtype=float) - self.center
        return float(0.5 * diff @ diff)

    def gradient(self, a: np.ndarray) -> np.ndarray:
        return np.asarray(a, dtype=float) - self.center

    def hessian(self, a: np.ndarray) -> np.ndarray:
        return np.eye(self.dimension)


@dataclasses.dataclass(frozen=True, eq=False)
class RandomQuarticLocal:
    """¼Σ a_i⁴ + ½ aᵀSa + tilt·a with a symmetric S."""

    shape: np.ndarray
    tilt: np.ndarray

    @property
    def dimension(self) -> int:
        return len(self.tilt)

    def value(self, a: np.ndarray) -> float:
        a = np.asarray(a, dtype=float)
        return float(0.25 * np.sum(a**4) + 0.5 * a @ self.shape @ a + self.tilt @ a)

    def gradient(self, a: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=float)
        return a**3 + self.shape @ a + self.tilt

    def hessian(self, a: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=float)
        return np.diag(3.0 * a**2) + self.shape


def zero_sum_tilts(
    rng: np.random.Generator, agents: int, dimension: int, scale: float
) -> np.ndarray:
    """Tilts b_n with Σ_n b_n = 0 exactly in floating point."""
    tilts = np.zeros((agents, dimension))
    if agents < 2 or scale == 0.0:
        return tilts
    raw = rng.uniform(-scale, scale, size=(agents - 1, dimension))
    tilts[:-1] = np.round(raw / TILT_QUANTUM) * TILT_QUANTUM
    tilts[-1] = -tilts[:-1].sum(axis=0)
    return tilts


def _quartic_saddle(
    agents: int, dimension: int, seed: Optional[int], scale: float, **_: object
) -> ObjectiveSet:
    if dimension != 2:
        raise ObjectiveError(f"quartic_saddle is defined for d=2, got d={dimension}")
    if seed is None:
        tilts = np.zeros((agents, dimension))
    else:
        tilts = zero_sum_tilts(np.random.default_rng(seed), agents, dimension, scale)
    weight = 1.0 / agents
    radius = VALIDITY_BOX_RADIUS
    return ObjectiveSet(
        dimension=dimension,
        locals=tuple(QuarticSaddleLocal(weight, b) for b in tilts),
        name="quartic_saddle",
        lipschitz_bound=weight * max(2.0, 3.0 * radius**2 - 2.0),
        coercive=(True,) * agents,
    )


def _quadratic_convex(
    agents: int,
    dimension: int,
    seed: Optional[int],
    scale: float,
    centers: Optional[Sequence[Sequence[float]]] = None,
    **_: object,
) -> ObjectiveSet:
    if centers is not None:
        c = np.asarray(centers, dtype=float)
        if c.shape != (agents, dimension):
            raise ObjectiveError(
                f"centers have shape {c.shape}, expected {(agents, dimension)}"
            )
    elif seed is not None:
        c = np.random.default_rng(seed).uniform(-1.0, 1.0, size=(agents, dimension))
    else:
        c = np.tile(np.linspace(-1.0, 1.0, agents)[:, None], (1, dimension))
    return ObjectiveSet(
        dimension=dimension,
        locals=tuple(QuadraticLocal(center) for center in c),
        name="quadratic_convex",
        lipschitz_bound=1.0,
        coercive=(True,) * agents,
    )


def _random_quartic(
    agents: int, dimension: int, seed: Optional[int], scale: float, **_: object
) -> ObjectiveSet:
    rng = np.random.default_rng(0 if seed is None else seed)
    locals_ = []
    tilts = zero_sum_tilts(rng, agents, dimension, scale)
    for n in range(agents):
        raw = rng.normal(0.0, 1.0, size=(dimension, dimension))
        locals_.append(RandomQuarticLocal(0.5 * (raw + raw.T), tilts[n]))
    radius = VALIDITY_BOX_RADIUS
    bound = max(
        3.0 * radius**2 + float(np.max(np.abs(np.linalg.eigvalsh(f.shape))))
        for f in locals_
    )
    return ObjectiveSet(
        dimension=dimension,
        locals=tuple(locals_),
        name="random_quartic",
        lipschitz_bound=bound,
        coercive=(True,) * agents,
    )


PRESETS: Dict[str, Callable[..., ObjectiveSet]] = {
    "quartic_saddle": _quartic_saddle,
    "quadratic_convex": _quadratic_convex,
    "random_quartic": _random_quartic,
}


def make_preset(
    name: str,
    agents: int,
    dimension: int,
    heterogeneity_seed: Optional[int] = None,
    heterogeneity_scale: float = DEFAULT_HETEROGENEITY_SCALE,
    centers: Optional[Sequence[Sequence[float]]] = None,
) -> ObjectiveSet:
    if name not in PRESETS:
        raise UnknownPreset(
            f"unknown objective preset {name!r}, expected one of {sorted(PRESETS)}"
        )
    if agents < 1 or dimension < 1:
        raise ObjectiveError(f"need N >= 1 and d >= 1, got N={agents} d={dimension}")
    obj = PRESETS[name](
        agents,
        dimension,
        heterogeneity_seed,
        heterogeneity_scale,
        centers=centers,
    )
    logger.debug(
        "Preset %s N=%s d=%s seed=%s", name, agents, dimension, heterogeneity_seed
    )
    return obj
