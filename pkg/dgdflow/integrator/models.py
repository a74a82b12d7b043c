import dataclasses
import enum
from typing import Callable, List, Optional

import numpy as np

from ..exceptions import IntegratorError


class TerminationKind(str, enum.Enum):
    HORIZON_REACHED = "horizon_reached"
    EVENT_FIRED = "event_fired"
    BOX_EXIT = "box_exit"
    STEP_FAILURE = "step_failure"


@dataclasses.dataclass(frozen=True)
class Termination:
    kind: TerminationKind
    t: float
    event: Optional[str] = None
    message: str = ""

    def __str__(self) -> str:
        if self.kind == TerminationKind.EVENT_FIRED:
            return f"event_fired({self.event})"
        return self.kind.value


@dataclasses.dataclass(frozen=True)
class DenseSegment:
    """Continuous extension on [t_old, t_old + h]."""

    t_old: float
    h: float
    evaluate: Callable[[float], np.ndarray]


@dataclasses.dataclass(eq=False)
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    termination: Termination
    accepted_steps: int = 0
    rejected_steps: int = 0
    field_evaluations: int = 0
    segments: List[DenseSegment] = dataclasses.field(default_factory=list)

    @property
    def final_time(self) -> float:
        return float(self.times[-1])

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]

    def __len__(self) -> int:
        return len(self.times)

    def interpolate(self, t: float) -> np.ndarray:
        if not self.segments:
            raise IntegratorError("trajectory was integrated without dense output")
        if not self.times[0] <= t <= self.times[-1]:
            raise IntegratorError(
                f"t={t} outside [{self.times[0]}, {self.times[-1]}]"
            )
        starts = np.array([s.t_old for s in self.segments])
        i = max(int(np.searchsorted(starts, t, side="right")) - 1, 0)
        return self.segments[i].evaluate(t)

    def reclocked(self, forward: Callable[[float], float]) -> "Trajectory":
        """The same samples on the clock t ↦ forward(t)."""
        return Trajectory(
            times=np.array([forward(float(t)) for t in self.times]),
            states=self.states,
            termination=dataclasses.replace(
                self.termination, t=forward(self.termination.t)
            ),
            accepted_steps=self.accepted_steps,
            rejected_steps=self.rejected_steps,
            field_evaluations=self.field_evaluations,
        )
