import dataclasses
import logging
from typing import Optional, Union

import numpy as np

from ..constants import VALIDITY_BOX_RADIUS
from ..dynamics.fields import FlowField, reclocked_field
from ..dynamics.schedule import Clock, Schedule
from ..graph import Graph
from ..integrator.models import Trajectory
from ..integrator.runge_kutta import integrate
from ..integrator.settings import IntegratorOptions
from ..objective.models import ObjectiveSet

__all__ = ("SimulationSetup",)

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True, eq=False)
class SimulationSetup:
    """Everything needed to run the DGD flow from an initial state."""

    graph: Graph
    objective: ObjectiveSet
    schedule: Schedule
    options: IntegratorOptions = dataclasses.field(default_factory=IntegratorOptions)
    horizon: float = 1e3
    init_low: float = -2.0
    init_high: float = 2.0
    box_radius: Optional[float] = VALIDITY_BOX_RADIUS
    clock: Clock = Clock.ORIGINAL

    @property
    def state_dimension(self) -> int:
        return self.objective.stacked_dimension

    def field(self, clock: Union[Clock, str, None] = None) -> FlowField:
        return reclocked_field(
            self.graph,
            self.objective,
            self.schedule,
            self.clock if clock is None else clock,
            box_radius=self.box_radius,
        )

    def simulate(self, x0: np.ndarray, horizon: Optional[float] = None) -> Trajectory:
        horizon = self.horizon if horizon is None else horizon
        return integrate(self.field(), x0, 0.0, horizon, self.options)

    def sample_initial_states(self, rng: np.random.Generator, count: int) -> np.ndarray:
        return rng.uniform(
            self.init_low, self.init_high, size=(count, self.state_dimension)
        )
