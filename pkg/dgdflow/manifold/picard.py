import logging
from typing import List, Optional

import numpy as np

from ..constants import PICARD_MAX_ITERATIONS, PICARD_TOL
from ..exceptions import ContractionConstantsError, ContractionFailed, ManifoldError
from .forcing import nonlinear_series, stable_convolution, unstable_convolution
from .models import LinearizedSystem, StableSolution

__all__ = (
    "solve_stable_solution",
    "sample_stable_coordinates",
)

logger = logging.getLogger(__name__)

RATIO_FLOOR = 1e-12


def _contraction_ratio(changes: List[float]) -> float:
    ratios = [
        after / before
        for before, after in zip(changes, changes[1:])
        if before > RATIO_FLOOR
    ]
    return max(ratios, default=0.0)


def _sup(u: np.ndarray) -> float:
    return float(np.max(np.linalg.norm(u, axis=1)))


def solve_stable_solution(
    system: LinearizedSystem,
    a_s: np.ndarray,
    t0: Optional[float] = None,
    horizon: Optional[float] = None,
    tol: float = PICARD_TOL,
    max_iterations: int = PICARD_MAX_ITERATIONS,
) -> StableSolution:
    """Fixed point of the integral map whose stable coordinates start at a_s.

    T(u) = V^s(t,t₀)(a_s; 0) + ∫_{t₀}^t V^s (F̃(u) − w) − ∫_t^∞ V^u (F̃(u) − w),
    iterated from the linear solution with trapezoid quadrature on the grid.
    """
    if t0 is not None or horizon is not None:
        start = system.start if t0 is None else t0
        end = system.times[-1] if horizon is None else start + horizon
        system = system.restrict(start, end)
    if system.epsilon is None or system.radius is None:
        raise ContractionConstantsError("calibrate the system on a ball first")
    limit = system.sigma / (6.0 * system.K)
    if system.epsilon >= limit:
        raise ContractionConstantsError(
            f"epsilon={system.epsilon:.4g} is not below sigma/(6K)={limit:.4g}"
        )
    a_s = np.atleast_1d(np.asarray(a_s, dtype=float))
    if a_s.shape != (system.k,):
        raise ManifoldError(f"a_s must have {system.k} entries, got {a_s.shape}")
    if np.linalg.norm(a_s) >= system.radius / 3:
        raise ManifoldError(
            f"|a_s|={np.linalg.norm(a_s):.4g} is not inside the r/3 ball "
            f"(r={system.radius})"
        )
    k = system.k
    w = system.forcing_terms()
    linear = np.zeros((len(system.times), system.dimension))
    linear[:, :k] = np.exp(system.cumulative[:, :k] - system.cumulative[0, :k]) * a_s
    u = linear
    changes: List[float] = []
    iterations = 0
    for iterations in range(1, max_iterations + 1):
        g = nonlinear_series(system, u) - w
        updated = (
            linear + stable_convolution(system, g) - unstable_convolution(system, g)
        )
        updated[0, :k] = a_s
        if _sup(updated) > system.radius:
            raise ContractionFailed(
                f"iterate {iterations} leaves the ball: |u|={_sup(updated):.4g} > "
                f"r={system.radius}"
            )
        changes.append(_sup(updated - u))
        u = updated
        logger.debug("Picard iteration %s: change %.3e", iterations, changes[-1])
        if changes[-1] < tol:
            break
    else:
        logger.warning(
            "Picard iteration stopped after %s steps with change %.3e",
            max_iterations,
            changes[-1],
        )
    ratio = _contraction_ratio(changes)
    if ratio >= 1.0:
        raise ContractionFailed(
            f"successive iterates do not contract (ratio {ratio:.3f})"
        )
    nonlinear = nonlinear_series(system, u)
    derivative = np.gradient(u, system.times, axis=0, edge_order=2)
    ode_residual = _sup(derivative - (system.eigenvalues * u + nonlinear - w))
    tail = 0.0
    if system.p:
        tail_norm = np.linalg.norm(w[-1]) + system.epsilon * np.linalg.norm(u[-1])
        tail = float(system.K * tail_norm / system.sigma)
    logger.debug(
        "Stable solution for a_s=%s: %s iterations, ratio %.3e, ODE residual %.2e",
        a_s,
        iterations,
        ratio,
        ode_residual,
    )
    return StableSolution(
        a_s=a_s,
        times=system.times,
        u=u,
        picard_iters=iterations,
        contraction_ratio=ratio,
        residual=changes[-1],
        ode_residual=ode_residual,
        tail_bound=tail,
    )


def sample_stable_coordinates(
    k: int, radius: float, count: int, rng: np.random.Generator
) -> np.ndarray:
    """``count`` points of the open r/3 ball in R^k, the origin first."""
    if count < 1:
        raise ManifoldError(f"need at least one sample, got {count}")
    directions = rng.standard_normal((count, k))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    radii = 0.99 * radius / 3 * rng.uniform(size=count) ** (1.0 / k)
    samples = directions * radii[:, None]
    samples[0] = 0.0
    return samples
