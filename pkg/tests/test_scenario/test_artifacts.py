import csv
import json
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np
import pytest

from dgdflow.manifold import ShotResult
from dgdflow.scenario import (
    ArtifactEvent,
    ArtifactWriter,
    RunJournal,
    ShotEvent,
    TrialEvent,
    versions,
)


@pytest.fixture()
def journal() -> RunJournal:
    return RunJournal()


@pytest.fixture()
def writer(tmp_path, journal) -> ArtifactWriter:
    return ArtifactWriter(tmp_path / "run", "abc123", journal)


@pytest.fixture()
def shot() -> ShotResult:
    return ShotResult(s=0.1, final_projection=1.0, max_distance=2.0, final_distance=2.0)


class TestRunJournal:
    def test_events_keep_their_order(self, journal, shot):
        journal.record(ShotEvent("r", shot))
        journal.record(ArtifactEvent("r", Path("a.csv"), "csv"))
        journal.record(ShotEvent("r", shot))
        assert len(journal) == 3
        assert len(journal.events(ShotEvent)) == 2
        assert [type(e) for e in journal.events(ArtifactEvent)] == [ArtifactEvent]
        assert journal.artifacts() == [Path("a.csv")]
        assert journal.stage_counts() == {"shot": 2, "artifact": 1}

    def test_empty_journal(self, journal):
        assert journal.events(TrialEvent) == []
        assert journal.artifacts() == []
        assert journal.stage_counts() == {}

    def test_concurrent_records(self, journal, shot):
        with ThreadPoolExecutor(max_workers=8) as pool:
            for i in range(200):
                pool.submit(journal.record, ShotEvent(str(i), shot))
        assert journal.stage_counts() == {"shot": 200}


class TestArtifactWriter:
    def test_csv_keeps_full_float_precision(self, writer):
        path = writer.csv("values.csv", ["t", "x"], [[0.1, np.float64(1 / 3)]])
        with path.open(encoding="utf-8") as f:
            rows = list(csv.reader(f))
        assert rows == [["t", "x"], ["0.1", repr(1 / 3)]]

    def test_json_accepts_arrays(self, writer):
        path = writer.json("summary.json", {"state": np.array([1.0, 2.0]), "n": 3})
        assert json.loads(path.read_text(encoding="utf-8")) == {
            "n": 3,
            "state": [1.0, 2.0],
        }

    def test_manifest_lists_what_was_written(self, writer, journal, shot):
        journal.record(ShotEvent("abc123", shot))
        writer.csv("b.csv", ["x"], [[1]])
        writer.json("a.json", {})
        path = writer.manifest("hash", 7, 0.5, "simulate")
        manifest = json.loads(path.read_text(encoding="utf-8"))
        assert manifest["artifacts"] == ["a.json", "b.csv"]
        assert manifest["events"] == {"artifact": 2, "shot": 1}
        assert manifest["run_id"] == "abc123"
        assert manifest["seed"] == 7
        assert manifest["versions"] == versions()
        assert all(e.run_id == "abc123" for e in journal.events(ArtifactEvent))

    def test_creates_the_directory(self, tmp_path):
        ArtifactWriter(tmp_path / "a" / "b", "run")
        assert (tmp_path / "a" / "b").is_dir()
