"""Command-line entry point: ``dgdflow <command> [--config scenario.toml] ...``."""
import argparse
import logging
import os
import sys
import traceback
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

from .constants import APP_NAME, APP_VERSION
from .exceptions import DgdError, ScenarioError
from .scenario import (
    ExperimentKind,
    Scenario,
    load_scenario,
    run_scenario,
    run_selftest,
    sweep,
    with_value,
)

__all__ = (
    "build_parser",
    "main",
)

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(levelname)s:%(message)s"

EXIT_OK = 0
EXIT_SELFTEST_FAILED = 1
EXIT_ERROR = 2

RUN_COMMANDS: Dict[str, ExperimentKind] = {
    "simulate": ExperimentKind.SIMULATE,
    "basins": ExperimentKind.BASINS,
    "consensus": ExperimentKind.CONSENSUS_REPORT,
    "manifold": ExperimentKind.MANIFOLD,
    "probe": ExperimentKind.PROBE,
}

# flag destination -> dotted scenario setting
OVERRIDES = {
    "seed": "seed",
    "t0": "manifold.t0",
    "horizon": "manifold.horizon",
    "grid_points": "manifold.grid_points",
    "radius": "manifold.radius",
    "samples": "manifold.samples",
    "direction": "probe.direction",
    "tol_s": "probe.tol_s",
}


def parse_value(text: str) -> Any:
    lowered = text.strip().lower()
    if lowered in ("true", "false"):
        return lowered == "true"
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            continue
    return text.strip()


def parse_values(text: str) -> List[Any]:
    return [parse_value(v) for v in text.split(",") if v.strip()]


def parse_vector(text: str) -> List[float]:
    try:
        return [float(v) for v in text.split(",")]
    except ValueError as e:
        raise argparse.ArgumentTypeError(
            f"expected comma-separated numbers: {e}"
        ) from e


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="scenario TOML file")
    common.add_argument("--seed", type=int, help="override the scenario seed")
    common.add_argument("--out", type=Path, help="output directory")
    common.add_argument(
        "--jobs",
        type=int,
        default=os.cpu_count() or 1,
        help="parallel trials or shots (default: available cores)",
    )
    common.add_argument("--verbose", action="store_true", help="debug logging")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(
        prog=APP_NAME,
        description="Distributed gradient descent flows on graphs.",
    )
    parser.add_argument("--version", action="version", version=APP_VERSION)
    commands = parser.add_subparsers(dest="command", required=True)
    commands.add_parser("simulate", parents=[common], help="one trajectory")
    commands.add_parser("basins", parents=[common], help="Monte-Carlo limit census")
    commands.add_parser("consensus", parents=[common], help="consensus report")

    manifold = commands.add_parser(
        "manifold", parents=[common], help="stable-manifold chart near a saddle"
    )
    manifold.add_argument("--t0", type=float)
    manifold.add_argument("--horizon", type=float)
    manifold.add_argument("--grid-points", type=int)
    manifold.add_argument("--radius", type=float)
    manifold.add_argument("--samples", type=int)

    probe = commands.add_parser(
        "probe", parents=[common], help="shoot across the stable manifold"
    )
    probe.add_argument("--direction", type=parse_vector, help="e.g. 0,1,0,-1")
    probe.add_argument("--tol-s", type=float)

    sweep_parser = commands.add_parser(
        "sweep", parents=[common], help="one run per value of a setting"
    )
    sweep_parser.add_argument(
        "--parameter", required=True, help="dotted setting, e.g. schedule.tau_beta"
    )
    sweep_parser.add_argument(
        "--values", type=parse_values, required=True, help="comma-separated values"
    )

    commands.add_parser("selftest", parents=[common], help="numerical oracle suite")
    return parser


def _scenario(args: argparse.Namespace) -> Scenario:
    scenario = Scenario() if args.config is None else load_scenario(args.config)
    if args.command in RUN_COMMANDS:
        scenario = with_value(scenario, "kind", RUN_COMMANDS[args.command].value)
    for dest, setting in OVERRIDES.items():
        value = getattr(args, dest, None)
        if value is not None:
            scenario = with_value(scenario, setting, value)
    if args.out is not None:
        scenario = with_value(scenario, "output", str(args.out))
    return scenario


def _origin(e: BaseException) -> str:
    tb = e.__traceback__
    module = __name__
    while tb is not None:
        module = tb.tb_frame.f_globals.get("__name__", module)
        tb = tb.tb_next
    return module


def _write(text: str) -> None:
    sys.stdout.write(text + "\n")


def _run(args: argparse.Namespace) -> int:
    scenario = _scenario(args)
    report = run_scenario(scenario, jobs=args.jobs)
    _write(f"{report.kind.value} {report.run_id} -> {report.out_dir}")
    for name, value in sorted(report.metrics.items()):
        _write(f"  {name} = {value}")
    return EXIT_OK


def _sweep(args: argparse.Namespace) -> int:
    scenario = _scenario(args)
    table = sweep(scenario, args.parameter, args.values, jobs=args.jobs)
    if table is None:
        _write(f"sweep over {args.parameter}: no values")
    else:
        _write(f"sweep over {args.parameter} -> {table}")
    return EXIT_OK


def _selftest(args: argparse.Namespace) -> int:
    report = run_selftest(0 if args.seed is None else args.seed)
    for check in report.checks:
        status = "ok" if check.passed else "FAIL"
        _write(f"{status:4} {check.name}: {check.value:.3e} ({check.threshold})")
    return EXIT_OK if report.passed else EXIT_SELFTEST_FAILED


def _handler(command: str) -> Callable[[argparse.Namespace], int]:
    if command == "sweep":
        return _sweep
    if command == "selftest":
        return _selftest
    return _run


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        format=LOG_FORMAT, level=logging.DEBUG if args.verbose else logging.INFO
    )
    try:
        return _handler(args.command)(args)
    except DgdError as e:
        logger.debug("%s failed:\n%s", args.command, traceback.format_exc())
        if isinstance(e, ScenarioError):
            sys.stderr.write(f"{APP_NAME}: error: {e}\n")
        else:
            sys.stderr.write(f"{APP_NAME}: {_origin(e)}: {type(e).__name__}: {e}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
