import logging

import numpy as np
from scipy import integrate

from ..constants import BURN_IN_FRACTION
from ..integrator.models import Trajectory
from ..objective.models import ObjectiveSet
from ..utils import unstack
from .models import DescentReport, PerturbationReport

__all__ = (
    "perturbation_residual",
    "descent_violations",
)

logger = logging.getLogger(__name__)

DESCENT_ABSOLUTE_SLACK = 1e-10


def _residuals(traj: Trajectory, obj: ObjectiveSet) -> np.ndarray:
    blocks = unstack(traj.states, obj.agent_count, obj.dimension)
    avg = blocks.mean(axis=1)
    out = np.zeros_like(avg)
    for k, (state, center) in enumerate(zip(blocks, avg)):
        for f, x_n in zip(obj.locals, state):
            out[k] += f.gradient(x_n) - f.gradient(center)
    return -out / obj.agent_count


def perturbation_residual(
    traj: Trajectory, obj: ObjectiveSet, window: float = 1.0
) -> PerturbationReport:
    """r(t) = −(1/N) Σ_n (∇f_n(y_n) − ∇f_n(y_avg)) on an α-clock trajectory.

    Also the windowed integral sup_{0 ≤ v ≤ window} ‖∫_t^{t+v} r‖ at every
    sample, from the cumulative trapezoid of the stored series.
    """
    residuals = _residuals(traj, obj)
    times = traj.times
    cumulative = integrate.cumulative_trapezoid(residuals, times, axis=0, initial=0)
    sup = np.zeros(len(times))
    for i, t in enumerate(times):
        j = int(np.searchsorted(times, t + window, side="right"))
        sup[i] = float(np.max(np.linalg.norm(cumulative[i:j] - cumulative[i], axis=1)))
    report = PerturbationReport(times, residuals, window, sup)
    logger.debug("Final perturbation residual %.3e", report.final_norm)
    return report


def descent_violations(
    traj: Trajectory,
    obj: ObjectiveSet,
    report: PerturbationReport,
    burn_in: float = BURN_IN_FRACTION,
) -> DescentReport:
    """Count increases of f(y_avg) beyond the slack 2‖r‖‖∇f‖ after burn-in."""
    blocks = unstack(traj.states, obj.agent_count, obj.dimension)
    avg = blocks.mean(axis=1)
    values = np.array([obj.eval_sum(a) for a in avg])
    grads = np.array([np.linalg.norm(obj.sum_gradient(a)) for a in avg])
    slack_rate = 2.0 * report.norms * grads
    times = traj.times
    start = times[0] + burn_in * (times[-1] - times[0])
    checked = violations = 0
    worst = 0.0
    for i in range(len(times) - 1):
        if times[i] < start:
            continue
        checked += 1
        allowed = (times[i + 1] - times[i]) * max(slack_rate[i], slack_rate[i + 1])
        allowed += DESCENT_ABSOLUTE_SLACK * (1.0 + abs(values[i]))
        excess = values[i + 1] - values[i] - allowed
        if excess > 0:
            violations += 1
            worst = max(worst, float(excess))
    if violations:
        logger.warning("%s descent violations beyond slack", violations)
    return DescentReport(checked, violations, worst, float(start))
