import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Optional, Tuple

import numpy as np

from ..constants import DELTA_SADDLE
from ..integrator import IntegratorOptions, integrate
from .models import ChartCheck, LinearizedSystem, ManifoldChart
from .picard import solve_stable_solution
from .setup import SaddleProblem, shot_options

__all__ = (
    "build_chart",
    "chart_consistency",
    "unstable_growth",
)

logger = logging.getLogger(__name__)


def build_chart(
    system: LinearizedSystem, samples: np.ndarray, jobs: int = 1
) -> ManifoldChart:
    """ψ(t₀, a_s) for every sample, mapped back to x = U(t₀)ᵀz + g(β_{t₀})."""
    samples = np.atleast_2d(np.asarray(samples, dtype=float))
    with ThreadPoolExecutor(max_workers=max(jobs, 1)) as pool:
        solutions = list(pool.map(lambda a: solve_stable_solution(system, a), samples))
    k = system.k
    psi = np.array([s.u[0, k:] for s in solutions])
    coords = np.hstack([samples, psi])
    frame, offset = system.frames[0], system.g_values[0]
    chart = ManifoldChart(
        base_time=system.start,
        k=k,
        samples=samples,
        psi_values=psi,
        points=coords @ frame + offset,
        frame=frame,
        offset=offset,
        contraction_ratios=np.array([s.contraction_ratio for s in solutions]),
        residuals=np.array([s.residual for s in solutions]),
    )
    logger.info(
        "Chart at t0=%.4g: %s samples, max |psi| %.3e, max ratio %.3e",
        chart.base_time,
        len(samples),
        float(np.max(np.abs(psi))) if psi.size else 0.0,
        float(chart.contraction_ratios.max()),
    )
    return chart


def chart_consistency(
    problem: SaddleProblem,
    system: LinearizedSystem,
    chart: ManifoldChart,
    horizon: Optional[float] = None,
    opts: Optional[IntegratorOptions] = None,
    perturbation: float = 1e-2,
) -> Tuple[ChartCheck, ...]:
    """Run the full flow from chart points and from points pushed off the chart.

    A point on the chart stays near the saddle; adding ``perturbation`` to the
    first unstable coordinate makes the trajectory leave.
    """
    horizon = system.horizon if horizon is None else horizon
    opts = opts or shot_options()
    field = problem.field()
    t0 = chart.base_time
    checks = []
    for sample, point, psi in zip(chart.samples, chart.points, chart.psi_values):
        on_chart = integrate(field, point, t0, t0 + horizon, opts)
        distances = np.linalg.norm(on_chart.states - problem.saddle, axis=1)
        z = np.concatenate([sample, psi])
        z[chart.k] += perturbation
        pushed = integrate(field, chart.to_state(z), t0, t0 + horizon, opts)
        checks.append(
            ChartCheck(
                sample=tuple(float(v) for v in sample),
                max_distance=float(distances.max()),
                perturbed_final_distance=float(
                    np.linalg.norm(pushed.final_state - problem.saddle)
                ),
            )
        )
    escaped = sum(c.perturbed_final_distance > DELTA_SADDLE for c in checks)
    logger.info(
        "Chart consistency: worst on-chart distance %.3e, %s/%s perturbed runs left",
        max(c.max_distance for c in checks),
        escaped,
        len(checks),
    )
    return tuple(checks)


def unstable_growth(system: LinearizedSystem, coefficient: float = 1e-6) -> float:
    """‖z(t_end)‖/‖z(t₀)‖ for the linear flow started at c on each unstable axis."""
    if system.p == 0 or coefficient == 0:
        return 0.0
    start = np.full(system.p, float(coefficient))
    rise = system.cumulative[-1, system.k :] - system.cumulative[0, system.k :]
    return float(np.linalg.norm(start * np.exp(rise)) / np.linalg.norm(start))
