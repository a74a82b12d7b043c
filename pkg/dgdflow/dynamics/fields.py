import dataclasses
import enum
import logging
from typing import Optional, Tuple, Union

import numpy as np

from ..constants import VALIDITY_BOX_RADIUS
from ..exceptions import ValidityBoxError
from ..graph import Graph, kron_laplacian
from ..objective.interface import IStackedObjective
from ..objective.models import ObjectiveSet
from ..typedefs import VectorField
from ..utils import unstack
from .schedule import Clock, IPenaltyWeight, Schedule, time_change

__all__ = (
    "FieldForm",
    "FlowField",
    "dgd_field",
    "penalized_field",
    "reclocked_field",
    "consensus_projection",
)

logger = logging.getLogger(__name__)


class FieldForm(str, enum.Enum):
    KRONECKER = "kronecker"
    AGENTS = "agents"


@dataclasses.dataclass(frozen=True, eq=False)
class FlowField:
    """A time-dependent vector field on R^M with a validity box."""

    fn: VectorField
    dimension: int
    box_radius: Optional[float] = VALIDITY_BOX_RADIUS
    name: str = "field"

    def inside(self, x: np.ndarray) -> bool:
        if self.box_radius is None:
            return True
        return bool(np.max(np.abs(x)) <= self.box_radius)

    def __call__(self, t: float, x: np.ndarray) -> np.ndarray:
        if not self.inside(x):
            raise ValidityBoxError(t, float(np.max(np.abs(x))), float(self.box_radius))
        return self.fn(t, x)


def dgd_field(
    g: Graph,
    obj: ObjectiveSet,
    s: Schedule,
    form: Union[FieldForm, str] = FieldForm.KRONECKER,
    box_radius: Optional[float] = VALIDITY_BOX_RADIUS,
) -> FlowField:
    """ẋ_n = β_t Σ_{ℓ∈Ω_n}(x_ℓ − x_n) − α_t ∇f_n(x_n)."""
    n_agents, d = obj.agent_count, obj.dimension
    if g.node_count != n_agents:
        raise ValueError(
            f"graph has {g.node_count} nodes but the objective has {n_agents} agents"
        )
    form = FieldForm(form)
    if form == FieldForm.KRONECKER:
        kron = kron_laplacian(g, d)

        def fn(t: float, x: np.ndarray) -> np.ndarray:
            alpha, beta = s.evaluate(t)
            return -beta * (kron @ x) - alpha * obj.stacked_gradient(x)

    else:
        neighbors = [
            np.asarray(g.neighbors(n), dtype=int) - 1 for n in range(1, n_agents + 1)
        ]

        def fn(t: float, x: np.ndarray) -> np.ndarray:
            alpha, beta = s.evaluate(t)
            blocks = unstack(x, n_agents, d)
            out = np.empty_like(blocks)
            for n, f in enumerate(obj.locals):
                disagreement = np.sum(blocks[neighbors[n]] - blocks[n], axis=0)
                out[n] = beta * disagreement - alpha * f.gradient(blocks[n])
            return out.reshape(-1)

    return FlowField(fn, n_agents * d, box_radius, name=f"dgd-{form.value}")


def penalized_field(
    h: IStackedObjective,
    q: np.ndarray,
    weight: IPenaltyWeight,
    box_radius: Optional[float] = VALIDITY_BOX_RADIUS,
) -> FlowField:
    """ẋ = −∇h(x) − w(t) Q x."""
    q = np.asarray(q, dtype=float)
    if q.shape != (h.dimension, h.dimension):
        raise ValueError(
            f"penalty matrix has shape {q.shape}, expected M={h.dimension}"
        )
    if np.min(np.linalg.eigvalsh(0.5 * (q + q.T))) < -1e-10:
        raise ValueError("penalty matrix must be positive semidefinite")

    def fn(t: float, x: np.ndarray) -> np.ndarray:
        return -h.gradient(x) - weight.value(t) * (q @ x)

    return FlowField(fn, h.dimension, box_radius, name="penalized")


def reclocked_field(
    g: Graph,
    obj: ObjectiveSet,
    s: Schedule,
    clock: Union[Clock, str],
    box_radius: Optional[float] = VALIDITY_BOX_RADIUS,
) -> FlowField:
    """The DGD flow expressed in the original, β- or α-clock."""
    clock = Clock(clock)
    if clock == Clock.ORIGINAL:
        return dgd_field(g, obj, s, box_radius=box_radius)
    tc = time_change(s, clock)
    kron = kron_laplacian(g, obj.dimension)
    if clock == Clock.BETA:

        def fn(t: float, x: np.ndarray) -> np.ndarray:
            return -(kron @ x) - tc.gamma(t) * obj.stacked_gradient(x)

    else:

        def fn(t: float, x: np.ndarray) -> np.ndarray:
            return -tc.gamma(t) * (kron @ x) - obj.stacked_gradient(x)

    return FlowField(fn, obj.stacked_dimension, box_radius, name=f"dgd-{clock.value}")


def consensus_projection(
    x: np.ndarray, agent_count: int, dimension: int
) -> Tuple[np.ndarray, np.ndarray]:
    """Split x into the block mean and its orthogonal complement.

    Works on a single state or on a stack of states along the leading axis.
    """
    x = np.asarray(x, dtype=float)
    blocks = unstack(x, agent_count, dimension)
    avg = blocks.mean(axis=-2)
    perp = (blocks - avg[..., None, :]).reshape(x.shape)
    return avg, perp
