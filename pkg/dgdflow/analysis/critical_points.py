import logging
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from ..constants import (
    DEDUPLICATION_RADIUS,
    NEWTON_MAX_ITERATIONS,
    R_CAPTURE,
    TOL_CONSENSUS,
    TOL_CRIT,
    TOL_LIMIT_GRADIENT,
)
from ..dynamics.fields import consensus_projection
from ..integrator.models import Trajectory
from ..objective.models import ObjectiveSet, classify_hessian
from ..typedefs import AtlasId
from .models import CriticalPoint, CriticalPointAtlas

__all__ = (
    "find_critical_points",
    "classify_limit",
    "newton_critical_point",
)

logger = logging.getLogger(__name__)

Region = Union[float, Tuple[Sequence[float], Sequence[float]]]


def _region_bounds(region: Region, dimension: int) -> Tuple[np.ndarray, np.ndarray]:
    if np.isscalar(region):
        r = float(region)  # type: ignore[arg-type]
        return np.full(dimension, -r), np.full(dimension, r)
    low, high = region  # type: ignore[misc]
    return (
        np.broadcast_to(np.asarray(low, dtype=float), (dimension,)).copy(),
        np.broadcast_to(np.asarray(high, dtype=float), (dimension,)).copy(),
    )


def newton_critical_point(
    obj: ObjectiveSet,
    start: np.ndarray,
    max_iterations: int = NEWTON_MAX_ITERATIONS,
    step_tol: float = 1e-12,
    escape_radius: float = 1e3,
) -> Optional[np.ndarray]:
    """Newton iteration on ∇f; None when it diverges or stalls."""
    a = np.array(start, dtype=float)
    for _ in range(max_iterations):
        grad = obj.sum_gradient(a)
        if not np.any(grad):
            return a
        try:
            step = np.linalg.solve(obj.sum_hessian(a), grad)
        except np.linalg.LinAlgError:
            return None
        a = a - step
        if not np.all(np.isfinite(a)) or np.linalg.norm(a) > escape_radius:
            return None
        if np.linalg.norm(step) < step_tol:
            return a
    return a


def find_critical_points(
    obj: ObjectiveSet,
    region: Region,
    n_seeds: int,
    rng: np.random.Generator,
    tol_crit: float = TOL_CRIT,
) -> CriticalPointAtlas:
    """Critical points of f in a box, from Newton runs at random seeds.

    The box center is always tried first; the rest of the seeds are uniform.
    """
    low, high = _region_bounds(region, obj.dimension)
    extra = rng.uniform(low, high, size=(max(n_seeds - 1, 0), obj.dimension))
    seeds = np.vstack([(low + high) / 2.0, extra])
    found: List[np.ndarray] = []
    diverged = 0
    for seed in seeds:
        a = newton_critical_point(obj, seed)
        if a is None or np.linalg.norm(obj.sum_gradient(a)) >= tol_crit:
            diverged += 1
            logger.debug("Newton from %s did not converge", seed.tolist())
            continue
        margin = DEDUPLICATION_RADIUS
        if np.any(a < low - margin) or np.any(a > high + margin):
            continue
        if any(np.linalg.norm(a - b) < DEDUPLICATION_RADIUS for b in found):
            continue
        found.append(a)
    if diverged:
        logger.warning("%s of %s Newton seeds diverged", diverged, len(seeds))
    found.sort(key=lambda a: tuple(np.round(a, 8)))
    points = tuple(
        CriticalPoint(
            id=AtlasId(i),
            location=tuple(float(v) for v in a),
            classification=classify_hessian(obj, a, tol_crit=tol_crit),
            value=obj.eval_sum(a),
        )
        for i, a in enumerate(found)
    )
    logger.info("Atlas: %s", ", ".join(p.label for p in points))
    return CriticalPointAtlas(
        points=points,
        region=(tuple(low.tolist()), tuple(high.tolist())),
        tol_crit=tol_crit,
        seeds=len(seeds),
        diverged_seeds=diverged,
    )


def classify_limit(
    traj: Trajectory,
    atlas: CriticalPointAtlas,
    obj: ObjectiveSet,
    r_capture: float = R_CAPTURE,
    tol_consensus: float = TOL_CONSENSUS,
    tol_gradient: float = TOL_LIMIT_GRADIENT,
) -> Optional[AtlasId]:
    """Atlas id of the point the run settled at, None when unresolved."""
    if not atlas.points:
        raise ValueError("cannot classify against an empty atlas")
    avg, perp = consensus_projection(traj.final_state, obj.agent_count, obj.dimension)
    if np.linalg.norm(perp) >= tol_consensus:
        return None
    if np.linalg.norm(obj.sum_gradient(avg)) >= tol_gradient:
        return None
    point, distance = atlas.nearest(avg)
    if distance >= r_capture:
        return None
    return point.id
