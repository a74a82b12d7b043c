import dataclasses
import enum
import logging
from typing import Optional, Tuple

import numpy as np
from scipy import linalg

from ..constants import TOL_CRIT, TOL_DEGENERATE
from ..exceptions import NotACriticalPoint, ObjectiveError
from ..utils import unstack
from .interface import ILocalObjective

__all__ = (
    "CriticalKind",
    "HessianClass",
    "ObjectiveSet",
    "SeparableObjective",
    "QuadraticForm",
    "classify_hessian",
    "classify_matrix",
)

logger = logging.getLogger(__name__)


class CriticalKind(str, enum.Enum):
    MINIMUM = "minimum"
    MAXIMUM = "maximum"
    SADDLE = "saddle"
    DEGENERATE = "degenerate"


@dataclasses.dataclass(frozen=True)
class HessianClass:
    kind: CriticalKind
    negative_count: int
    eigenvalues: Tuple[float, ...]

    def __str__(self) -> str:
        if self.kind == CriticalKind.SADDLE:
            return f"saddle({self.negative_count})"
        return self.kind.value


@dataclasses.dataclass(frozen=True, eq=False)
class ObjectiveSet:
    """The N local objectives f_n whose sum is f."""

    dimension: int
    locals: Tuple[ILocalObjective, ...]
    name: str = "custom"
    lipschitz_bound: Optional[float] = None
    coercive: Tuple[bool, ...] = ()

    def __post_init__(self) -> None:
        if not self.locals:
            raise ObjectiveError("an objective set needs at least one local function")
        for n, f in enumerate(self.locals, start=1):
            if f.dimension != self.dimension:
                raise ObjectiveError(
                    f"local {n} has dimension {f.dimension}, expected {self.dimension}"
                )

    @property
    def agent_count(self) -> int:
        return len(self.locals)

    @property
    def stacked_dimension(self) -> int:
        return self.agent_count * self.dimension

    def eval_sum(self, a: np.ndarray) -> float:
        a = np.asarray(a, dtype=float)
        value = float(sum(f.value(a) for f in self.locals))
        if not np.isfinite(value):
            raise ObjectiveError(f"sum objective is not finite at {a.tolist()}")
        return value

    def sum_gradient(self, a: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=float)
        return np.sum([f.gradient(a) for f in self.locals], axis=0)

    def sum_hessian(self, a: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=float)
        return np.sum([f.hessian(a) for f in self.locals], axis=0)

    def stacked_value(self, x: np.ndarray) -> float:
        blocks = unstack(x, self.agent_count, self.dimension)
        return float(sum(f.value(b) for f, b in zip(self.locals, blocks)))

    def stacked_gradient(self, x: np.ndarray) -> np.ndarray:
        blocks = unstack(x, self.agent_count, self.dimension)
        return np.concatenate([f.gradient(b) for f, b in zip(self.locals, blocks)])

    def stacked_hessian(self, x: np.ndarray) -> np.ndarray:
        blocks = unstack(x, self.agent_count, self.dimension)
        return linalg.block_diag(
            *[f.hessian(b) for f, b in zip(self.locals, blocks)]
        )

    def stacked(self) -> "SeparableObjective":
        return SeparableObjective(self)

    def embed(self, a: np.ndarray) -> np.ndarray:
        """The consensus point 1_N ⊗ a."""
        return np.tile(np.asarray(a, dtype=float), self.agent_count)


@dataclasses.dataclass(frozen=True, eq=False)
class SeparableObjective:
    """h(x) = Σ_n f_n(x_n) on the stacked space."""

    objectives: ObjectiveSet

    @property
    def dimension(self) -> int:
        return self.objectives.stacked_dimension

    def value(self, x: np.ndarray) -> float:
        return self.objectives.stacked_value(x)

    def gradient(self, x: np.ndarray) -> np.ndarray:
        return self.objectives.stacked_gradient(x)

    def hessian(self, x: np.ndarray) -> np.ndarray:
        return self.objectives.stacked_hessian(x)


@dataclasses.dataclass(frozen=True, eq=False)
class QuadraticForm:
    """h(x) = ½ xᵀHx + bᵀx."""

    matrix: np.ndarray
    linear: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        h = np.asarray(self.matrix, dtype=float)
        if h.ndim != 2 or h.shape[0] != h.shape[1]:
            raise ObjectiveError(f"quadratic form needs a square matrix, got {h.shape}")
        if not np.allclose(h, h.T, atol=1e-12):
            raise ObjectiveError("quadratic form matrix must be symmetric")
        object.__setattr__(self, "matrix", h)
        b = np.zeros(h.shape[0]) if self.linear is None else self.linear
        object.__setattr__(self, "linear", np.asarray(b, dtype=float))

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    def value(self, x: np.ndarray) -> float:
        x = np.asarray(x, dtype=float)
        return float(0.5 * x @ self.matrix @ x + self.linear @ x)

    def gradient(self, x: np.ndarray) -> np.ndarray:
        return self.matrix @ np.asarray(x, dtype=float) + self.linear

    def hessian(self, x: np.ndarray) -> np.ndarray:
        return self.matrix.copy()


def classify_matrix(
    hessian: np.ndarray, tol_degenerate: float = TOL_DEGENERATE
) -> HessianClass:
    eigenvalues = linalg.eigvalsh(hessian)
    scale = max(float(np.max(np.abs(eigenvalues))), 1.0)
    negative = int(np.sum(eigenvalues < 0))
    values = tuple(float(v) for v in eigenvalues)
    if np.min(np.abs(eigenvalues)) < tol_degenerate * scale:
        return HessianClass(CriticalKind.DEGENERATE, negative, values)
    if negative == 0:
        return HessianClass(CriticalKind.MINIMUM, 0, values)
    if negative == len(eigenvalues):
        return HessianClass(CriticalKind.MAXIMUM, negative, values)
    return HessianClass(CriticalKind.SADDLE, negative, values)


def classify_hessian(
    obj: ObjectiveSet,
    a: np.ndarray,
    tol_crit: float = TOL_CRIT,
    tol_degenerate: float = TOL_DEGENERATE,
) -> HessianClass:
    a = np.asarray(a, dtype=float)
    grad_norm = float(np.linalg.norm(obj.sum_gradient(a)))
    if grad_norm >= tol_crit:
        raise NotACriticalPoint(
            f"|grad f| = {grad_norm:.3e} at {a.tolist()} is not below {tol_crit:g}"
        )
    result = classify_matrix(obj.sum_hessian(a), tol_degenerate)
    logger.debug("Point %s classified as %s", a.tolist(), result)
    return result
