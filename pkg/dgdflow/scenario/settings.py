"""Scenario files: TOML tables mapped onto plain settings dataclasses."""
import dataclasses
import enum
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union, get_type_hints

import tomlkit
from tomlkit.exceptions import ParseError

from .._errors import handle_stage_error
from ..analysis.simulation import SimulationSetup
from ..constants import (
    DEFAULT_HETEROGENEITY_SCALE,
    DELTA_SADDLE,
    TOL_LIMIT_GRADIENT,
    TOL_S,
    VALIDITY_BOX_RADIUS,
)
from ..dynamics.schedule import Clock, Schedule
from ..exceptions import ScenarioError
from ..graph import Graph, build_graph, graph_from_preset, is_connected
from ..integrator.settings import IntegratorMethod, IntegratorOptions
from ..objective.models import ObjectiveSet
from ..objective.presets import make_preset
from ..utils import dataclass_from_dict, dataclass_to_dict

__all__ = (
    "ExperimentKind",
    "GraphSpec",
    "ObjectiveSpec",
    "ScheduleSpec",
    "IntegratorSpec",
    "InitSpec",
    "BasinSpec",
    "ConsensusSpec",
    "ManifoldSpec",
    "ProbeSpec",
    "Scenario",
    "load_scenario",
    "loads_scenario",
    "scenario_from_dict",
    "dumps_scenario",
    "scenario_payload",
)

logger = logging.getLogger(__name__)


class ExperimentKind(str, enum.Enum):
    SIMULATE = "simulate"
    BASINS = "basins"
    CONSENSUS_REPORT = "consensus_report"
    MANIFOLD = "manifold"
    PROBE = "probe"


@dataclasses.dataclass()
class GraphSpec:
    preset: str = "ring"
    nodes: int = 4
    edges: Optional[List[List[int]]] = None

    @handle_stage_error("graph.edges")
    def _from_edges(self) -> Graph:
        return build_graph(self.nodes, self.edges or [])

    @handle_stage_error("graph.preset")
    def _from_preset(self) -> Graph:
        return graph_from_preset(self.preset, self.nodes)

    def build(self) -> Graph:
        graph = self._from_preset() if self.edges is None else self._from_edges()
        if not is_connected(graph):
            raise ScenarioError(
                "graph.edges" if self.edges is not None else "graph.nodes",
                "the communication graph must be connected",
            )
        return graph


@dataclasses.dataclass()
class ObjectiveSpec:
    preset: str = "quartic_saddle"
    dimension: int = 2
    heterogeneity_seed: Optional[int] = None
    heterogeneity_scale: float = DEFAULT_HETEROGENEITY_SCALE
    centers: Optional[List[List[float]]] = None

    @handle_stage_error("objective")
    def build(self, agents: int) -> ObjectiveSet:
        return make_preset(
            self.preset,
            agents,
            self.dimension,
            heterogeneity_seed=self.heterogeneity_seed,
            heterogeneity_scale=self.heterogeneity_scale,
            centers=self.centers,
        )


@dataclasses.dataclass()
class ScheduleSpec:
    tau_alpha: float = 0.6
    tau_beta: float = 0.1
    clock: Clock = Clock.ORIGINAL

    @handle_stage_error("schedule")
    def build(self) -> Schedule:
        return Schedule(tau_alpha=self.tau_alpha, tau_beta=self.tau_beta)


@dataclasses.dataclass()
class IntegratorSpec:
    method: IntegratorMethod = IntegratorMethod.RK45_ADAPTIVE
    abs_tol: float = 1e-8
    rel_tol: float = 1e-8
    h_init: float = 1e-2
    h_min: float = 1e-12
    h_max: float = 100.0
    max_steps: int = 1_000_000
    stride: int = 1

    @handle_stage_error("integrator")
    def build(self) -> IntegratorOptions:
        return IntegratorOptions(
            method=self.method,
            abs_tol=self.abs_tol,
            rel_tol=self.rel_tol,
            h_init=self.h_init,
            h_min=self.h_min,
            h_max=self.h_max,
            max_steps=self.max_steps,
            stride=self.stride,
        )


@dataclasses.dataclass()
class InitSpec:
    low: float = -2.0
    high: float = 2.0
    horizon: float = 1000.0
    box_radius: float = VALIDITY_BOX_RADIUS


@dataclasses.dataclass()
class BasinSpec:
    trials: int = 200
    atlas_seeds: int = 64
    atlas_region: float = 2.5
    tol_gradient: float = TOL_LIMIT_GRADIENT


@dataclasses.dataclass()
class ConsensusSpec:
    window: float = 1.0
    burn_in: float = 0.1
    envelope_radius: Optional[float] = None


@dataclasses.dataclass()
class ManifoldSpec:
    saddle: List[float] = dataclasses.field(default_factory=lambda: [0.0, 0.0])
    t0: float = 4.0
    horizon: float = 10.0
    grid_points: int = 2001
    beta_points: int = 400
    radius: float = 0.1
    samples: int = 5
    perturbation: float = 1e-2
    check_consistency: bool = True


@dataclasses.dataclass()
class ProbeSpec:
    saddle: List[float] = dataclasses.field(default_factory=lambda: [0.0, 0.0])
    direction: Optional[List[float]] = None
    stable_offset: Optional[List[float]] = None
    s_low: float = -0.1
    s_high: float = 0.1
    tol_s: float = TOL_S
    t0: float = 0.0
    horizon: Optional[float] = None
    margin: float = 1e-2
    delta: float = DELTA_SADDLE


@dataclasses.dataclass()
class Scenario:
    kind: ExperimentKind = ExperimentKind.SIMULATE
    seed: int = 0
    output: str = "out"
    graph: GraphSpec = dataclasses.field(default_factory=GraphSpec)
    objective: ObjectiveSpec = dataclasses.field(default_factory=ObjectiveSpec)
    schedule: ScheduleSpec = dataclasses.field(default_factory=ScheduleSpec)
    integrator: IntegratorSpec = dataclasses.field(default_factory=IntegratorSpec)
    init: InitSpec = dataclasses.field(default_factory=InitSpec)
    basins: BasinSpec = dataclasses.field(default_factory=BasinSpec)
    consensus: ConsensusSpec = dataclasses.field(default_factory=ConsensusSpec)
    manifold: ManifoldSpec = dataclasses.field(default_factory=ManifoldSpec)
    probe: ProbeSpec = dataclasses.field(default_factory=ProbeSpec)

    def simulation_setup(self, clock: Optional[Clock] = None) -> SimulationSetup:
        graph = self.graph.build()
        return SimulationSetup(
            graph=graph,
            objective=self.objective.build(graph.node_count),
            schedule=self.schedule.build(),
            options=self.integrator.build(),
            horizon=self.init.horizon,
            init_low=self.init.low,
            init_high=self.init.high,
            box_radius=self.init.box_radius,
            clock=self.schedule.clock if clock is None else clock,
        )

    def validate(self) -> None:
        self.simulation_setup()


def _load_table(klass: Any, section: str, table: Any) -> Any:
    if not isinstance(table, dict):
        raise ScenarioError(section, f"expected a table, got {table!r}")
    hints = get_type_hints(klass)
    values: Dict[str, Any] = {}
    for key, raw in table.items():
        field = f"{section}.{key}" if section else key
        if key not in hints:
            raise ScenarioError(field, "unknown setting")
        if dataclasses.is_dataclass(hints[key]):
            values[key] = _load_table(hints[key], field, raw)
        else:
            values[key] = handle_stage_error(field)(dataclass_from_dict)(
                hints[key], raw
            )
    return handle_stage_error(section or "scenario")(klass)(**values)


# shorthand keys accepted in scenario files, each read into its canonical setting
_ALIASES: Dict[Tuple[str, str], Tuple[str, str]] = {
    ("objective", "N"): ("graph", "nodes"),
    ("objective", "seed"): ("objective", "heterogeneity_seed"),
    ("integrator", "horizon"): ("init", "horizon"),
    ("", "clock"): ("schedule", "clock"),
}


def _resolve_aliases(payload: Dict[str, Any]) -> Dict[str, Any]:
    payload = {k: dict(v) if isinstance(v, dict) else v for k, v in payload.items()}
    for (section, key), (target, name) in _ALIASES.items():
        source = payload.get(section) if section else payload
        if not isinstance(source, dict) or key not in source:
            continue
        alias = f"{section}.{key}" if section else key
        value = source.pop(key)
        table = payload.setdefault(target, {})
        if not isinstance(table, dict):
            raise ScenarioError(target, f"expected a table, got {table!r}")
        if name in table and table[name] != value:
            raise ScenarioError(
                alias, f"conflicts with {target}.{name} = {table[name]!r}"
            )
        table[name] = value
        logger.debug("Read %s as %s.%s", alias, target, name)
    return payload


def scenario_from_dict(payload: Dict[str, Any]) -> Scenario:
    return _load_table(Scenario, "", _resolve_aliases(payload))


def loads_scenario(text: str) -> Scenario:
    try:
        document = tomlkit.parse(text)
    except ParseError as e:
        raise ScenarioError("scenario", f"malformed TOML: {e}") from e
    return scenario_from_dict(document.unwrap())


def load_scenario(path: Union[str, Path]) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ScenarioError("scenario", f"cannot read {path}: {e}") from e
    scenario = loads_scenario(text)
    logger.info("Loaded %s scenario from %s", scenario.kind.value, path)
    return scenario


def _strip_none(value: Any) -> Any:
    if isinstance(value, dict):
        return {k: _strip_none(v) for k, v in value.items() if v is not None}
    if isinstance(value, (list, tuple)):
        return [_strip_none(v) for v in value]
    return value


def scenario_payload(scenario: Scenario) -> Dict[str, Any]:
    """The scenario as plain data, the form embedded in every summary."""
    return _strip_none(dataclass_to_dict(scenario))


def dumps_scenario(scenario: Scenario) -> str:
    document = tomlkit.document()
    for key, value in scenario_payload(scenario).items():
        document[key] = value
    return tomlkit.dumps(document)
