from pathlib import Path

import pytest

from dgdflow.scenario import ExperimentKind, RunReport


@pytest.fixture()
def scenario_file(tmp_path) -> Path:
    path = tmp_path / "scenario.toml"
    path.write_text(
        'kind = "simulate"\nseed = 1\n\n[graph]\npreset = "path"\nnodes = 2\n',
        encoding="utf-8",
    )
    return path


@pytest.fixture()
def fake_report(tmp_path) -> RunReport:
    return RunReport(
        kind=ExperimentKind.SIMULATE,
        run_id="0123456789ab",
        out_dir=tmp_path / "out",
        metrics={"final_residual": 0.5},
        manifest=tmp_path / "out" / "manifest.json",
    )
