import dataclasses
import logging
import time
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from .._errors import handle_stage_error
from ..analysis import (
    CriticalPointAtlas,
    classify_limit,
    consensus_bound_envelope,
    consensus_residual,
    descent_violations,
    find_critical_points,
    monte_carlo_basins,
    perturbation_residual,
)
from ..dynamics.fields import consensus_projection
from ..dynamics.schedule import Clock, time_change
from ..exceptions import ScenarioError
from ..integrator import integrate
from ..logging import log_run
from ..manifold import (
    ProbeResult,
    SaddleProblem,
    build_chart,
    chart_consistency,
    critical_path,
    forcing_series,
    linearize,
    sample_stable_coordinates,
    shooting_probe,
    unstable_growth,
)
from ..objective.models import CriticalKind, ObjectiveSet
from ..utils import stable_hash
from .artifacts import ArtifactWriter, RunJournal, ShotEvent, TrialEvent
from .settings import ExperimentKind, Scenario, scenario_payload

__all__ = (
    "RunReport",
    "ScenarioRunner",
    "run_scenario",
)

logger = logging.getLogger(__name__)

Metrics = Dict[str, float]


@dataclasses.dataclass(frozen=True)
class RunReport:
    kind: ExperimentKind
    run_id: str
    out_dir: Path
    metrics: Metrics
    manifest: Path


def _state_columns(prefix: str, size: int) -> List[str]:
    return [f"{prefix}_{i}" for i in range(1, size + 1)]


class ScenarioRunner:
    """Runs one scenario and writes its artifacts into one directory."""

    def __init__(
        self,
        scenario: Scenario,
        out_dir: Optional[Path] = None,
        jobs: int = 1,
        journal: Optional[RunJournal] = None,
    ) -> None:
        self.scenario = scenario
        self.out_dir = Path(scenario.output if out_dir is None else out_dir)
        self.jobs = max(int(jobs), 1)
        self.journal = RunJournal() if journal is None else journal
        self._payload = scenario_payload(scenario)
        self.scenario_hash = stable_hash(self._payload)
        self.run_id = self.scenario_hash[:12]
        self._handlers: Dict[ExperimentKind, Callable[[ArtifactWriter], Metrics]] = {
            ExperimentKind.SIMULATE: self._simulate,
            ExperimentKind.BASINS: self._basins,
            ExperimentKind.CONSENSUS_REPORT: self._consensus,
            ExperimentKind.MANIFOLD: self._manifold,
            ExperimentKind.PROBE: self._probe,
        }

    def run(self) -> RunReport:
        kind = self.scenario.kind
        log_run(self.run_id, kind.value)
        writer = ArtifactWriter(self.out_dir, self.run_id, self.journal)
        started = time.perf_counter()
        metrics = self._handlers[kind](writer)
        wall_time = time.perf_counter() - started
        manifest = writer.manifest(
            self.scenario_hash, self.scenario.seed, wall_time, kind.value
        )
        logger.info("Run %s (%s) finished in %.2fs", self.run_id, kind.value, wall_time)
        return RunReport(kind, self.run_id, self.out_dir, metrics, manifest)

    def _summary(self, **fields: Any) -> Dict[str, Any]:
        return {
            "scenario": self._payload,
            "scenario_hash": self.scenario_hash,
            "seed": self.scenario.seed,
            **fields,
        }

    def _initial_state(self, objective: ObjectiveSet) -> np.ndarray:
        rng = np.random.default_rng(self.scenario.seed)
        low, high = self.scenario.init.low, self.scenario.init.high
        return rng.uniform(low, high, size=objective.stacked_dimension)

    def _atlas(self, objective: ObjectiveSet) -> CriticalPointAtlas:
        spec = self.scenario.basins
        return find_critical_points(
            objective,
            spec.atlas_region,
            spec.atlas_seeds,
            np.random.default_rng(self.scenario.seed),
        )

    def _simulate(self, writer: ArtifactWriter) -> Metrics:
        setup = self.scenario.simulation_setup()
        obj = setup.objective
        x0 = self._initial_state(obj)
        traj = setup.simulate(x0)
        avg, perp = consensus_projection(traj.states, obj.agent_count, obj.dimension)
        perp_norms = np.linalg.norm(perp, axis=1)
        grad_norms = [float(np.linalg.norm(obj.sum_gradient(a))) for a in avg]
        values = [obj.eval_sum(a) for a in avg]
        writer.csv(
            "trajectory.csv",
            ["t", *_state_columns("x", setup.state_dimension), "perp_norm"]
            + ["grad_norm", "f_avg"],
            (
                [t, *x, p, g, f]
                for t, x, p, g, f in zip(
                    traj.times, traj.states, perp_norms, grad_norms, values
                )
            ),
        )
        writer.csv(
            "consensus.csv", ["t", "perp_norm"], zip(traj.times, perp_norms)
        )
        metrics = {
            "final_time": traj.final_time,
            "final_residual": float(perp_norms[-1]),
            "final_gradient": grad_norms[-1],
            "f_avg": values[-1],
        }
        writer.json(
            "summary.json",
            self._summary(
                initial_state=x0,
                final_state=traj.final_state,
                termination=str(traj.termination),
                accepted_steps=traj.accepted_steps,
                rejected_steps=traj.rejected_steps,
                **metrics,
            ),
        )
        return metrics

    def _basins(self, writer: ArtifactWriter) -> Metrics:
        setup = self.scenario.simulation_setup()
        spec = self.scenario.basins
        atlas = self._atlas(setup.objective)
        stats = monte_carlo_basins(
            setup,
            atlas,
            spec.trials,
            self.scenario.seed,
            jobs=self.jobs,
            tol_gradient=spec.tol_gradient,
            on_trial=lambda o: self.journal.record(TrialEvent(self.run_id, o)),
        )
        writer.csv(
            "trials.csv",
            ["index", "limit", "final_time", "final_residual", "final_gradient"]
            + ["termination"],
            (
                [
                    o.index,
                    "unresolved" if o.atlas_id is None else atlas[o.atlas_id].label,
                    o.final_time,
                    o.final_residual,
                    o.final_gradient,
                    o.termination,
                ]
                for o in stats.outcomes
            ),
        )
        metrics = {
            "saddle_hits": float(stats.count(atlas, CriticalKind.SADDLE)),
            "minimum_hits": float(stats.count(atlas, CriticalKind.MINIMUM)),
            "unresolved": float(stats.unresolved),
        }
        writer.json(
            "basins.json",
            self._summary(
                trials=stats.trials,
                hits=stats.hits,
                init_distribution=stats.init_distribution,
                atlas=[
                    {"label": p.label, "location": p.location, "value": p.value}
                    for p in atlas.points
                ],
                **metrics,
            ),
        )
        return metrics

    def _consensus(self, writer: ArtifactWriter) -> Metrics:
        setup = self.scenario.simulation_setup(clock=Clock.ORIGINAL)
        spec = self.scenario.consensus
        obj, schedule = setup.objective, setup.schedule
        x0 = self._initial_state(obj)
        traj = setup.simulate(x0)
        beta_clock = traj.reclocked(time_change(schedule, Clock.BETA).forward)
        alpha_clock = traj.reclocked(time_change(schedule, Clock.ALPHA).forward)
        radius = spec.envelope_radius or self.scenario.init.box_radius
        report = consensus_residual(beta_clock, obj.agent_count, obj.dimension)
        envelope = consensus_bound_envelope(
            setup.graph, schedule, x0, beta_clock.times, obj, radius=radius
        )
        report = dataclasses.replace(report, bound_envelope=envelope)
        perturbation = perturbation_residual(alpha_clock, obj, spec.window)
        descent = descent_violations(alpha_clock, obj, perturbation, spec.burn_in)
        writer.csv(
            "consensus.csv",
            ["t", "t_beta", "t_alpha", "perp_norm", "envelope", "r_norm"]
            + ["r_window_sup"],
            zip(
                traj.times,
                beta_clock.times,
                alpha_clock.times,
                report.perp_norms,
                report.bound_envelope,
                perturbation.norms,
                perturbation.windowed_sup,
            ),
        )
        metrics = {
            "final_residual": report.final_residual,
            "below_envelope": float(report.below_envelope()),
            "final_perturbation": perturbation.final_norm,
            "descent_violations": float(descent.violations),
        }
        writer.json(
            "consensus.json",
            self._summary(
                termination=str(traj.termination),
                descent=descent,
                window=spec.window,
                **metrics,
            ),
        )
        return metrics

    def _saddle_problem(self, section: str, saddle: List[float]) -> SaddleProblem:
        return handle_stage_error(f"{section}.saddle")(self._build_saddle_problem)(
            section, saddle
        )

    def _build_saddle_problem(self, section: str, saddle: List[float]) -> SaddleProblem:
        graph = self.scenario.graph.build()
        obj = self.scenario.objective.build(graph.node_count)
        probing = section == "probe"
        problem = SaddleProblem.from_dgd(
            graph,
            obj,
            self.scenario.schedule.build(),
            np.asarray(saddle, dtype=float),
            box_radius=self.scenario.init.box_radius,
            min_nullity=1 if probing else 2,
        )
        restricted = problem.restricted_class()
        accepted = {CriticalKind.SADDLE}
        if probing:
            # a restricted maximum is still a saddle of the penalized flow
            accepted.add(CriticalKind.MAXIMUM)
        if restricted.kind not in accepted:
            raise ScenarioError(
                f"{section}.saddle", f"x* is a {restricted.kind.value}, not a saddle"
            )
        return problem

    def _manifold(self, writer: ArtifactWriter) -> Metrics:
        spec = self.scenario.manifold
        problem = self._saddle_problem("manifold", spec.saddle)
        times = np.linspace(spec.t0, spec.t0 + spec.horizon, spec.grid_points)
        weight = problem.weight
        betas = np.geomspace(
            weight.value(times[0]), weight.value(times[-1]), spec.beta_points
        )
        path = critical_path(problem.h, problem.q, problem.saddle, betas)
        system = linearize(path, weight, times, radius=spec.radius)
        rng = np.random.default_rng(self.scenario.seed)
        samples = sample_stable_coordinates(system.k, spec.radius, spec.samples, rng)
        chart = build_chart(system, samples, jobs=self.jobs)
        checks = (
            chart_consistency(problem, system, chart, perturbation=spec.perturbation)
            if spec.check_consistency
            else ()
        )
        forcing = forcing_series(system)
        header = _state_columns("a_s", system.k) + _state_columns("psi", system.p)
        header += _state_columns("x", system.dimension)
        header += ["contraction_ratio", "residual"]
        if checks:
            header += ["max_distance", "perturbed_final_distance"]
        rows = []
        for i, (a_s, psi, x) in enumerate(
            zip(chart.samples, chart.psi_values, chart.points)
        ):
            row = [*a_s, *psi, *x, chart.contraction_ratios[i], chart.residuals[i]]
            if checks:
                row += [checks[i].max_distance, checks[i].perturbed_final_distance]
            rows.append(row)
        writer.csv("chart.csv", header, rows)
        metrics = {
            "k": float(system.k),
            "p": float(system.p),
            "alpha": system.alpha_rate,
            "sigma": system.sigma,
            "K": system.K,
            "epsilon": float(system.epsilon or 0.0),
            "contraction_bound": system.contraction_bound,
            "max_contraction_ratio": float(chart.contraction_ratios.max()),
            "max_psi": float(np.max(np.abs(chart.psi_values), initial=0.0)),
            "max_forcing": float(np.max(np.linalg.norm(forcing, axis=1))),
            "unstable_growth": unstable_growth(system),
        }
        writer.json(
            "constants.json",
            self._summary(
                radius=spec.radius,
                t0=spec.t0,
                restricted_class=str(problem.restricted_class()),
                contraction_ratios=chart.contraction_ratios,
                max_path_residual=float(path.residuals.max()),
                chart_checks=checks,
                **metrics,
            ),
        )
        return metrics

    def _settled_limit(
        self,
        problem: SaddleProblem,
        atlas: CriticalPointAtlas,
        obj: ObjectiveSet,
        state: np.ndarray,
        result: ProbeResult,
    ) -> Dict[str, Any]:
        """Continue a margin shot to the scenario horizon and classify it."""
        schedule = self.scenario.schedule.build()
        end = time_change(schedule, Clock.ALPHA).forward(self.scenario.init.horizon)
        # never shorter than one more probe horizon
        end = max(end, result.end_time + result.horizon)
        options = self.scenario.integrator.build()
        traj = integrate(problem.field(), state, result.end_time, end, options)
        atlas_id = classify_limit(
            traj, atlas, obj, tol_gradient=self.scenario.basins.tol_gradient
        )
        avg, _ = consensus_projection(traj.final_state, obj.agent_count, obj.dimension)
        return {
            "label": "unresolved" if atlas_id is None else atlas[atlas_id].label,
            "final_gradient": float(np.linalg.norm(obj.sum_gradient(avg))),
            "final_time": traj.final_time,
            "termination": str(traj.termination),
        }

    def _probe(self, writer: ArtifactWriter) -> Metrics:
        spec = self.scenario.probe
        problem = self._saddle_problem("probe", spec.saddle)
        if spec.direction is None:
            direction = problem.unstable_direction(spec.t0)
        else:
            direction = np.asarray(spec.direction, dtype=float)
        base = problem.saddle.copy()
        if spec.stable_offset is not None:
            base = base + np.asarray(spec.stable_offset, dtype=float)
        if direction.shape != base.shape:
            raise ScenarioError(
                "probe.direction",
                f"expected {base.size} entries, got {direction.size}",
            )
        result = shooting_probe(
            problem,
            base,
            direction,
            s_range=(spec.s_low, spec.s_high),
            tol_s=spec.tol_s,
            t0=spec.t0,
            horizon=spec.horizon,
            delta=spec.delta,
            margin=spec.margin,
            jobs=self.jobs,
        )
        for shot in result.shots:
            self.journal.record(ShotEvent(self.run_id, shot))
        writer.csv(
            "probe.csv",
            ["s", "final_projection", "max_distance", "final_distance"],
            (
                [s.s, s.final_projection, s.max_distance, s.final_distance]
                for s in result.shots
            ),
        )
        graph = self.scenario.graph.build()
        obj = self.scenario.objective.build(graph.node_count)
        atlas = self._atlas(obj)
        sides = (("below", result.below_state), ("above", result.above_state))
        limits = {
            side: self._settled_limit(problem, atlas, obj, state, result)
            for side, state in sides
        }
        metrics = {
            "s_star": result.s_star,
            "width": result.width,
            "max_distance_at_boundary": result.at_boundary.max_distance,
        }
        writer.json(
            "probe.json",
            self._summary(
                direction=direction,
                bracket=result.bracket,
                at_boundary=result.at_boundary,
                below=result.below,
                above=result.above,
                limits=limits,
                **metrics,
            ),
        )
        return metrics


def run_scenario(
    scenario: Scenario,
    out_dir: Optional[Path] = None,
    jobs: int = 1,
    journal: Optional[RunJournal] = None,
) -> RunReport:
    return ScenarioRunner(scenario, out_dir, jobs, journal).run()
