import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Tuple

import numpy as np

from ..constants import DELTA_SADDLE, TOL_S
from ..exceptions import ManifoldError, NoBoundaryFound
from ..integrator import IntegratorOptions, integrate
from .models import ProbeResult, ShotResult
from .setup import SaddleProblem, shot_options

__all__ = ("shooting_probe",)

logger = logging.getLogger(__name__)

HORIZON_FACTOR = 10.0

Shot = Tuple[ShotResult, np.ndarray]


def _shooter(
    problem: SaddleProblem,
    base_point: np.ndarray,
    direction: np.ndarray,
    t0: float,
    horizon: float,
    opts: IntegratorOptions,
) -> Callable[[float], Shot]:
    field = problem.field()

    def shoot(s: float) -> Shot:
        traj = integrate(field, base_point + s * direction, t0, t0 + horizon, opts)
        offsets = traj.states - problem.saddle
        final = traj.final_state
        result = ShotResult(
            s=float(s),
            final_projection=float(direction @ (final - problem.saddle)),
            max_distance=float(np.max(np.linalg.norm(offsets, axis=1))),
            final_distance=float(np.linalg.norm(final - problem.saddle)),
        )
        logger.debug("Shot s=%.9g: projection %.4g", s, result.final_projection)
        return result, final

    return shoot


def shooting_probe(
    problem: SaddleProblem,
    base_point: np.ndarray,
    direction: np.ndarray,
    s_range: Tuple[float, float] = (-0.1, 0.1),
    tol_s: float = TOL_S,
    t0: float = 0.0,
    horizon: Optional[float] = None,
    opts: Optional[IntegratorOptions] = None,
    delta: float = DELTA_SADDLE,
    margin: Optional[float] = None,
    jobs: int = 1,
) -> ProbeResult:
    """Bisect base + s·direction for the stable manifold of the saddle.

    The sign of the final projection on ``direction`` tells on which side a
    shot escaped. Both ends of ``s_range`` must escape beyond ``delta`` to
    opposite sides. The boundary is reported with shots at s* ± margin, where
    the margin defaults to 10·tol_s.
    """
    low, high = sorted(float(v) for v in s_range)
    if not high > low or tol_s <= 0:
        raise ManifoldError(f"bad probe range {s_range} or tolerance {tol_s}")
    direction = np.asarray(direction, dtype=float)
    direction = direction / np.linalg.norm(direction)
    base_point = np.asarray(base_point, dtype=float)
    if horizon is None:
        horizon = HORIZON_FACTOR / problem.unstable_rate(t0)
    opts = opts or shot_options()
    shoot = _shooter(problem, base_point, direction, t0, horizon, opts)
    with ThreadPoolExecutor(max_workers=max(jobs, 1)) as pool:
        (low_shot, _), (high_shot, _) = pool.map(shoot, (low, high))
    shots: List[ShotResult] = [low_shot, high_shot]
    low_sign = np.sign(low_shot.final_projection)
    if (
        min(abs(low_shot.final_projection), abs(high_shot.final_projection)) <= delta
        or low_sign == np.sign(high_shot.final_projection)
    ):
        raise NoBoundaryFound(
            f"shots at s={low:.4g} and s={high:.4g} do not escape to opposite "
            f"sides (projections {low_shot.final_projection:.4g}, "
            f"{high_shot.final_projection:.4g})"
        )
    while high - low >= tol_s:
        middle = 0.5 * (low + high)
        shot, _ = shoot(middle)
        shots.append(shot)
        if np.sign(shot.final_projection) == low_sign:
            low = middle
        else:
            high = middle
    s_star = 0.5 * (low + high)
    margin = 10.0 * tol_s if margin is None else margin
    with ThreadPoolExecutor(max_workers=max(jobs, 1)) as pool:
        (at, _), (below, below_state), (above, above_state) = pool.map(
            shoot, (s_star, s_star - margin, s_star + margin)
        )
    shots.extend((at, below, above))
    logger.info(
        "Probe boundary s*=%.9g after %s shots; max distance at s* %.3e",
        s_star,
        len(shots),
        at.max_distance,
    )
    return ProbeResult(
        s_star=s_star,
        bracket=(low, high),
        shots=tuple(shots),
        at_boundary=at,
        below=below,
        above=above,
        below_state=below_state,
        above_state=above_state,
        t0=t0,
        horizon=horizon,
    )
