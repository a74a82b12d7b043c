import dataclasses
import logging
from typing import Optional

import numpy as np
from scipy import linalg

from ..constants import TOL_SPECTRAL, VALIDITY_BOX_RADIUS
from ..dynamics.fields import FlowField, penalized_field
from ..dynamics.schedule import Clock, ClockRatio, IPenaltyWeight, Schedule, time_change
from ..exceptions import ManifoldError, ScheduleError
from ..graph import Graph, kron_laplacian
from ..integrator.settings import IntegratorOptions
from ..objective.interface import IStackedObjective
from ..objective.models import HessianClass, ObjectiveSet, classify_matrix

__all__ = (
    "SaddleProblem",
    "shot_options",
)

logger = logging.getLogger(__name__)


def shot_options() -> IntegratorOptions:
    """Tolerances for runs that must follow a stable manifold near the saddle."""
    return IntegratorOptions(abs_tol=1e-11, rel_tol=1e-11, h_init=1e-3, h_max=0.5)


@dataclasses.dataclass(frozen=True, eq=False)
class SaddleProblem:
    """The flow ẋ = −∇h(x) − w(t) Q x around a constrained saddle x*."""

    h: IStackedObjective
    q: np.ndarray
    weight: IPenaltyWeight
    saddle: np.ndarray
    box_radius: Optional[float] = VALIDITY_BOX_RADIUS
    # the chart needs 2; shooting also works on scalar agent states
    min_nullity: int = 2

    def __post_init__(self) -> None:
        q = np.asarray(self.q, dtype=float)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "saddle", np.asarray(self.saddle, dtype=float))
        if self.nullity < self.min_nullity:
            raise ManifoldError(
                f"the penalty nullspace has dimension {self.nullity}, at least "
                f"{self.min_nullity} is required"
            )
        if np.linalg.norm(q @ self.saddle) > 1e-9 * max(1.0, np.linalg.norm(q)):
            raise ManifoldError("the saddle must lie in the nullspace of Q")

    @classmethod
    def from_dgd(
        cls,
        g: Graph,
        obj: ObjectiveSet,
        s: Schedule,
        saddle: np.ndarray,
        box_radius: Optional[float] = VALIDITY_BOX_RADIUS,
        min_nullity: int = 2,
    ) -> "SaddleProblem":
        """The DGD flow in the α-clock, where the penalty is the ratio β/α."""
        if s.tau_beta == 0:
            raise ScheduleError(
                "manifold experiments need tau_beta > 0 so that the consensus "
                "weight grows without bound"
            )
        return cls(
            h=obj.stacked(),
            q=kron_laplacian(g, obj.dimension),
            weight=ClockRatio(time_change(s, Clock.ALPHA)),
            saddle=obj.embed(saddle),
            box_radius=box_radius,
            min_nullity=min_nullity,
        )

    @property
    def dimension(self) -> int:
        return self.h.dimension

    @property
    def nullspace(self) -> np.ndarray:
        eigenvalues, eigenvectors = linalg.eigh(self.q)
        scale = max(1.0, float(np.max(np.abs(eigenvalues))))
        return eigenvectors[:, np.abs(eigenvalues) < TOL_SPECTRAL * scale]

    @property
    def nullity(self) -> int:
        return int(self.nullspace.shape[1])

    def restricted_class(self) -> HessianClass:
        """Classification of x* for h restricted to the nullspace of Q."""
        z = self.nullspace
        gradient = z.T @ self.h.gradient(self.saddle)
        if np.linalg.norm(gradient) > 1e-6:
            raise ManifoldError(
                f"x* is not critical on the nullspace (|grad| = "
                f"{np.linalg.norm(gradient):.3e})"
            )
        return classify_matrix(z.T @ self.h.hessian(self.saddle) @ z)

    def field(self) -> FlowField:
        return penalized_field(self.h, self.q, self.weight, self.box_radius)

    def jacobian(self, t: float) -> np.ndarray:
        """−(∇²h(x*) + w(t)Q), the flow Jacobian at the saddle."""
        jacobian = -(self.h.hessian(self.saddle) + self.weight.value(t) * self.q)
        return 0.5 * (jacobian + jacobian.T)

    def unstable_rate(self, t: float) -> float:
        """Smallest positive eigenvalue of the flow Jacobian at x* and time t."""
        values = linalg.eigvalsh(self.jacobian(t))
        positive = values[values > TOL_SPECTRAL]
        if not len(positive):
            raise ManifoldError(f"no unstable direction at x* for t={t:.6g}")
        return float(positive.min())

    def unstable_direction(self, t: float) -> np.ndarray:
        """Unit eigenvector of the largest Jacobian eigenvalue at x* and time t."""
        _, vectors = linalg.eigh(self.jacobian(t))
        direction = vectors[:, -1]
        return direction * np.sign(direction[np.argmax(np.abs(direction))])
