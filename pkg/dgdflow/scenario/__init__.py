from .artifacts import (
    ArtifactEvent,
    ArtifactWriter,
    RunEvent,
    RunJournal,
    ShotEvent,
    TrialEvent,
    versions,
)
from .runner import RunReport, ScenarioRunner, run_scenario
from .selftest import SelftestCheck, SelftestReport, run_selftest
from .settings import (
    BasinSpec,
    ConsensusSpec,
    ExperimentKind,
    GraphSpec,
    InitSpec,
    IntegratorSpec,
    ManifoldSpec,
    ObjectiveSpec,
    ProbeSpec,
    Scenario,
    ScheduleSpec,
    dumps_scenario,
    load_scenario,
    loads_scenario,
    scenario_from_dict,
    scenario_payload,
)
from .sweep import sweep, with_value

__all__ = (
    "ArtifactEvent",
    "ArtifactWriter",
    "RunEvent",
    "RunJournal",
    "ShotEvent",
    "TrialEvent",
    "versions",
    "RunReport",
    "ScenarioRunner",
    "run_scenario",
    "SelftestCheck",
    "SelftestReport",
    "run_selftest",
    "BasinSpec",
    "ConsensusSpec",
    "ExperimentKind",
    "GraphSpec",
    "InitSpec",
    "IntegratorSpec",
    "ManifoldSpec",
    "ObjectiveSpec",
    "ProbeSpec",
    "Scenario",
    "ScheduleSpec",
    "dumps_scenario",
    "load_scenario",
    "loads_scenario",
    "scenario_from_dict",
    "scenario_payload",
    "sweep",
    "with_value",
)
