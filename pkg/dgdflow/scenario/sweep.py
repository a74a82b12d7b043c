import copy
import logging
from pathlib import Path
from typing import Any, List, Optional, Sequence, Tuple

from ..exceptions import ScenarioError
from .artifacts import ArtifactWriter
from .runner import RunReport, ScenarioRunner
from .settings import Scenario, scenario_from_dict, scenario_payload

__all__ = (
    "with_value",
    "sweep",
)

logger = logging.getLogger(__name__)


def with_value(scenario: Scenario, parameter: str, value: Any) -> Scenario:
    """A copy of the scenario with the dotted scalar ``parameter`` replaced.

    The copy goes through the same loader as a scenario file, so a bad value
    is reported against the dotted name.
    """
    payload = copy.deepcopy(scenario_payload(scenario))
    *parents, leaf = parameter.split(".")
    table = payload
    for name in parents:
        table = table.get(name)
        if not isinstance(table, dict):
            raise ScenarioError(parameter, "not a scalar setting path")
    if isinstance(table.get(leaf), dict):
        raise ScenarioError(parameter, "not a scalar setting path")
    table[leaf] = value
    return scenario_from_dict(payload)


def _label(parameter: str, value: Any) -> str:
    return f"{parameter}={value}".replace("/", "_")


def sweep(
    scenario: Scenario,
    parameter: str,
    values: Sequence[Any],
    out_dir: Optional[Path] = None,
    jobs: int = 1,
) -> Optional[Path]:
    """One run per value plus an aggregate table keyed by value.

    Every value is validated before the first run starts. An empty value list
    does nothing and returns None.
    """
    if not values:
        logger.info("Sweep over %s has no values, nothing to run", parameter)
        return None
    variants: List[Tuple[Any, Scenario]] = []
    for value in values:
        variant = with_value(scenario, parameter, value)
        variant.validate()
        variants.append((value, variant))
    root = Path(scenario.output if out_dir is None else out_dir)
    reports: List[RunReport] = []
    for value, variant in variants:
        logger.info("Sweep %s = %s", parameter, value)
        runner = ScenarioRunner(variant, root / _label(parameter, value), jobs)
        reports.append(runner.run())
    metric_names = sorted({name for r in reports for name in r.metrics})
    writer = ArtifactWriter(root, f"sweep-{parameter}")
    return writer.csv(
        "sweep.csv",
        [parameter, "run_id", *metric_names],
        (
            [value, report.run_id, *(report.metrics.get(m, "") for m in metric_names)]
            for (value, _), report in zip(variants, reports)
        ),
    )
