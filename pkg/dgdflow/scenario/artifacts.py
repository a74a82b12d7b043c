import collections
import csv
import dataclasses
import json
import logging
import platform
import threading
from pathlib import Path
from typing import (
    Any,
    ClassVar,
    Dict,
    Iterable,
    List,
    Optional,
    Sequence,
    Type,
    TypeVar,
)

import numpy as np
import scipy

from ..analysis.models import TrialOutcome
from ..constants import APP_NAME, APP_VERSION
from ..manifold.models import ShotResult
from ..utils import json_default

__all__ = (
    "RunEvent",
    "TrialEvent",
    "ShotEvent",
    "ArtifactEvent",
    "RunJournal",
    "ArtifactWriter",
    "versions",
)

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"


@dataclasses.dataclass(frozen=True)
class RunEvent:
    run_id: str

    stage: ClassVar[str] = "run"


@dataclasses.dataclass(frozen=True)
class TrialEvent(RunEvent):
    outcome: TrialOutcome

    stage: ClassVar[str] = "trial"


@dataclasses.dataclass(frozen=True)
class ShotEvent(RunEvent):
    shot: ShotResult

    stage: ClassVar[str] = "shot"


@dataclasses.dataclass(frozen=True)
class ArtifactEvent(RunEvent):
    path: Path
    kind: str

    stage: ClassVar[str] = "artifact"


E = TypeVar("E", bound=RunEvent)


class RunJournal:
    """What one run did, in the order it happened.

    Stages record trials and shots here and the writer records every file;
    the manifest is assembled from the journal.
    """

    def __init__(self) -> None:
        self._events: List[RunEvent] = []
        self._lock = threading.Lock()

    def record(self, event: RunEvent) -> None:
        with self._lock:
            self._events.append(event)

    def events(self, kind: Type[E]) -> List[E]:
        with self._lock:
            return [e for e in self._events if isinstance(e, kind)]

    def stage_counts(self) -> Dict[str, int]:
        with self._lock:
            return dict(collections.Counter(e.stage for e in self._events))

    def artifacts(self) -> List[Path]:
        return [e.path for e in self.events(ArtifactEvent)]

    def __len__(self) -> int:
        return len(self._events)


def versions() -> Dict[str, str]:
    return {
        APP_NAME: APP_VERSION,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
    }


def _cell(value: Any) -> Any:
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, np.integer):
        return int(value)
    return value


class ArtifactWriter:
    """The single writer of a run directory.

    Every file goes through here so the journal lists it in the manifest.
    """

    def __init__(
        self,
        out_dir: Path,
        run_id: str,
        journal: Optional[RunJournal] = None,
    ) -> None:
        self.out_dir = Path(out_dir)
        self.run_id = run_id
        self.journal = RunJournal() if journal is None else journal
        self.out_dir.mkdir(parents=True, exist_ok=True)

    def _record(self, path: Path, kind: str) -> Path:
        self.journal.record(ArtifactEvent(self.run_id, path, kind))
        logger.debug("Wrote %s", path)
        return path

    def csv(
        self, name: str, header: Sequence[str], rows: Iterable[Sequence[Any]]
    ) -> Path:
        path = self.out_dir / name
        with path.open("w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([_cell(v) for v in row])
        return self._record(path, "csv")

    def json(self, name: str, payload: Dict[str, Any]) -> Path:
        path = self.out_dir / name
        text = json.dumps(payload, sort_keys=True, indent=2, default=json_default)
        path.write_text(text + "\n", encoding="utf-8")
        return self._record(path, "json")

    def manifest(
        self, scenario_hash: str, seed: int, wall_time: float, kind: str
    ) -> Path:
        path = self.out_dir / MANIFEST_NAME
        payload = {
            "run_id": self.run_id,
            "kind": kind,
            "scenario_hash": scenario_hash,
            "seed": seed,
            "versions": versions(),
            "wall_time": wall_time,
            "artifacts": sorted(p.name for p in self.journal.artifacts()),
            "events": self.journal.stage_counts(),
        }
        text = json.dumps(payload, sort_keys=True, indent=2, default=json_default)
        path.write_text(text + "\n", encoding="utf-8")
        logger.info("Run %s wrote %s artifacts", self.run_id, len(payload["artifacts"]))
        return path
