import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Optional

import numpy as np

from ..constants import R_CAPTURE, TOL_CONSENSUS, TOL_LIMIT_GRADIENT
from ..dynamics.fields import consensus_projection
from .critical_points import classify_limit
from .models import BasinStats, CriticalPointAtlas, TrialOutcome
from .simulation import SimulationSetup

__all__ = ("monte_carlo_basins",)

logger = logging.getLogger(__name__)


def _run_trial(
    setup: SimulationSetup,
    atlas: CriticalPointAtlas,
    index: int,
    x0: np.ndarray,
    tol_gradient: float,
) -> TrialOutcome:
    traj = setup.simulate(x0)
    obj = setup.objective
    avg, perp = consensus_projection(traj.final_state, obj.agent_count, obj.dimension)
    atlas_id = classify_limit(
        traj, atlas, obj, R_CAPTURE, TOL_CONSENSUS, tol_gradient=tol_gradient
    )
    logger.debug("Trial %s -> %s (%s)", index, atlas_id, traj.termination)
    return TrialOutcome(
        index=index,
        initial_state=tuple(float(v) for v in x0),
        atlas_id=atlas_id,
        final_time=traj.final_time,
        final_residual=float(np.linalg.norm(perp)),
        final_gradient=float(np.linalg.norm(obj.sum_gradient(avg))),
        termination=str(traj.termination),
    )


def monte_carlo_basins(
    setup: SimulationSetup,
    atlas: CriticalPointAtlas,
    trials: int,
    rng_seed: int,
    jobs: int = 1,
    tol_gradient: float = TOL_LIMIT_GRADIENT,
    on_trial: Optional[Callable[[TrialOutcome], None]] = None,
) -> BasinStats:
    """Integrate uniform random initial states and count where they settle.

    Initial states are drawn up front from one generator, so the result does
    not depend on the number of workers.
    """
    if trials < 1:
        raise ValueError(f"need at least one trial, got {trials}")
    inits = setup.sample_initial_states(np.random.default_rng(rng_seed), trials)
    with ThreadPoolExecutor(max_workers=max(jobs, 1)) as pool:
        outcomes = list(
            pool.map(
                lambda item: _run_trial(setup, atlas, item[0], item[1], tol_gradient),
                enumerate(inits),
            )
        )
    hits = {p.label: 0 for p in atlas.points}
    unresolved = 0
    for outcome in outcomes:
        if on_trial is not None:
            on_trial(outcome)
        if outcome.atlas_id is None:
            unresolved += 1
        else:
            hits[atlas[outcome.atlas_id].label] += 1
    stats = BasinStats(
        trials=trials,
        hits=hits,
        unresolved=unresolved,
        init_distribution=(
            f"uniform[{setup.init_low}, {setup.init_high}]^{setup.state_dimension}"
        ),
        rng_seed=rng_seed,
        outcomes=tuple(outcomes),
    )
    logger.info("Basins after %s trials: %s, unresolved %s", trials, hits, unresolved)
    return stats
