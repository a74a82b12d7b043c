import dataclasses
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..objective.models import CriticalKind, HessianClass
from ..typedefs import AtlasId


@dataclasses.dataclass(eq=False)
class ConsensusReport:
    times: np.ndarray
    perp_norms: np.ndarray
    bound_envelope: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        if len(self.times) != len(self.perp_norms):
            raise ValueError("times and perp_norms differ in length")
        if self.bound_envelope is not None and len(self.bound_envelope) != len(
            self.times
        ):
            raise ValueError("bound envelope does not match the sample times")

    @property
    def final_residual(self) -> float:
        return float(self.perp_norms[-1])

    def below_envelope(self, slack: float = 1e-9) -> bool:
        if self.bound_envelope is None:
            raise ValueError("report carries no bound envelope")
        return bool(np.all(self.perp_norms <= self.bound_envelope + slack))


@dataclasses.dataclass(frozen=True)
class CriticalPoint:
    id: AtlasId
    location: Tuple[float, ...]
    classification: HessianClass
    value: float

    @property
    def label(self) -> str:
        coords = ",".join(f"{c:.6g}" for c in self.location)
        return f"{self.classification}@({coords})"

    @property
    def is_saddle(self) -> bool:
        return self.classification.kind == CriticalKind.SADDLE

    @property
    def is_minimum(self) -> bool:
        return self.classification.kind == CriticalKind.MINIMUM


@dataclasses.dataclass(frozen=True)
class CriticalPointAtlas:
    points: Tuple[CriticalPoint, ...]
    region: Tuple[Tuple[float, ...], Tuple[float, ...]]
    tol_crit: float
    seeds: int
    diverged_seeds: int = 0

    def __len__(self) -> int:
        return len(self.points)

    def __getitem__(self, atlas_id: int) -> CriticalPoint:
        return self.points[atlas_id]

    def nearest(self, a: np.ndarray) -> Tuple[CriticalPoint, float]:
        if not self.points:
            raise ValueError("atlas is empty")
        distances = [
            float(np.linalg.norm(np.asarray(p.location) - a)) for p in self.points
        ]
        i = int(np.argmin(distances))
        return self.points[i], distances[i]

    def saddles(self) -> List[CriticalPoint]:
        return [p for p in self.points if p.is_saddle]

    def minima(self) -> List[CriticalPoint]:
        return [p for p in self.points if p.is_minimum]


@dataclasses.dataclass(frozen=True)
class TrialOutcome:
    index: int
    initial_state: Tuple[float, ...]
    atlas_id: Optional[AtlasId]
    final_time: float
    final_residual: float
    final_gradient: float
    termination: str


@dataclasses.dataclass(frozen=True)
class BasinStats:
    trials: int
    hits: Dict[str, int]
    unresolved: int
    init_distribution: str
    rng_seed: int
    outcomes: Tuple[TrialOutcome, ...] = ()

    def __post_init__(self) -> None:
        if sum(self.hits.values()) + self.unresolved != self.trials:
            raise ValueError("basin hit counts do not sum to the number of trials")

    def count(self, atlas: CriticalPointAtlas, kind: CriticalKind) -> int:
        return sum(
            self.hits.get(p.label, 0)
            for p in atlas.points
            if p.classification.kind == kind
        )


@dataclasses.dataclass(eq=False)
class PerturbationReport:
    times: np.ndarray
    residuals: np.ndarray
    window: float
    windowed_sup: np.ndarray

    @property
    def norms(self) -> np.ndarray:
        return np.linalg.norm(self.residuals, axis=1)

    @property
    def final_norm(self) -> float:
        return float(self.norms[-1])


@dataclasses.dataclass(frozen=True)
class DescentReport:
    checked: int
    violations: int
    max_excess: float
    burn_in_time: float
