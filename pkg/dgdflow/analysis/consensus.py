import itertools
import logging
import math
from typing import Optional

import numpy as np
from scipy import integrate
from scipy.stats import qmc

from ..constants import VALIDITY_BOX_RADIUS
from ..dynamics.fields import consensus_projection
from ..dynamics.schedule import Clock, Schedule, fit_ratio_exponent, time_change
from ..exceptions import ConsensusBoundError
from ..graph import Graph, laplacian
from ..integrator.models import Trajectory
from ..objective.models import ObjectiveSet
from .models import ConsensusReport

__all__ = (
    "consensus_residual",
    "consensus_bound_envelope",
    "gradient_bound",
    "homogeneous_decay",
)

logger = logging.getLogger(__name__)

GRID_POINTS_PER_AXIS = 41
# boxes whose grid would exceed this are sampled with a scrambled Sobol set
MAX_BOX_POINTS = 4096


def _box_points(dimension: int, radius: float) -> np.ndarray:
    if GRID_POINTS_PER_AXIS**dimension <= MAX_BOX_POINTS:
        axis = np.linspace(-radius, radius, GRID_POINTS_PER_AXIS)
        return np.array(list(itertools.product(axis, repeat=dimension)))
    sobol = qmc.Sobol(dimension, scramble=True, seed=0)
    unit = sobol.random_base2(int(math.log2(MAX_BOX_POINTS)))
    points = [radius * (2.0 * unit - 1.0)]
    if 2**dimension <= MAX_BOX_POINTS:
        corners = itertools.product((-radius, radius), repeat=dimension)
        points.append(np.array(list(corners)))
    logger.debug(
        "Sampling %s points of the %s-dimensional box",
        sum(len(p) for p in points),
        dimension,
    )
    return np.vstack(points)


def consensus_residual(
    traj: Trajectory, agent_count: int, dimension: int
) -> ConsensusReport:
    _, perp = consensus_projection(traj.states, agent_count, dimension)
    return ConsensusReport(times=traj.times, perp_norms=np.linalg.norm(perp, axis=1))


def gradient_bound(obj: ObjectiveSet, radius: float = VALIDITY_BOX_RADIUS) -> float:
    """Max of the stacked-gradient norm over [-radius, radius]^{Nd}.

    The stacked gradient is separable, so the maximum is assembled from the
    per-agent maxima over the d-dimensional box. Small boxes are gridded;
    from d = 3 on the box is sampled and its corners are always included.
    """
    points = _box_points(obj.dimension, radius)
    squares = [
        max(float(np.sum(f.gradient(p) ** 2)) for p in points) for f in obj.locals
    ]
    return float(np.sqrt(sum(squares)))


def homogeneous_decay(g: Graph, x0: np.ndarray, dimension: int, t: float) -> float:
    """‖Φ(t) x0^⊥‖ for Φ(t) = exp(−t L⊗I_d)."""
    spectral = laplacian(g)
    _, perp = consensus_projection(x0, g.node_count, dimension)
    blocks = perp.reshape(g.node_count, dimension)
    v = spectral.eigenvectors
    modes = v.T @ blocks
    decayed = v @ (np.exp(-spectral.eigenvalues * t)[:, None] * modes)
    return float(np.linalg.norm(decayed))


def consensus_bound_envelope(
    g: Graph,
    s: Schedule,
    x0: np.ndarray,
    t_grid: np.ndarray,
    obj: ObjectiveSet,
    radius: float = VALIDITY_BOX_RADIUS,
    constant: Optional[float] = None,
    tau_gamma: Optional[float] = None,
) -> np.ndarray:
    """Bound on ‖y^⊥(t)‖ in the β-clock.

    ‖Φ(t)x0^⊥‖ + C ∫_0^t e^{−λ₂(t−u)} (u+1)^{−τ_γ} du, where C bounds the
    stacked gradient on the box of the given radius and τ_γ is fitted on the
    grid unless given.
    """
    lambda2 = laplacian(g).lambda2
    if lambda2 <= 0:
        raise ConsensusBoundError(
            f"the bound needs a connected graph, got lambda2={lambda2:.3g}"
        )
    t_grid = np.asarray(t_grid, dtype=float)
    if np.any(np.diff(t_grid) <= 0) or t_grid[0] < 0:
        raise ConsensusBoundError("bound grid must be nonnegative and increasing")
    if constant is None:
        constant = gradient_bound(obj, radius)
    if tau_gamma is None:
        tc = time_change(s, Clock.BETA)
        positive = t_grid[t_grid > 0]
        tau_gamma = fit_ratio_exponent(tc, positive) if positive.size else 0.0
    d = obj.dimension

    def kernel(u: float, t: float) -> float:
        return float(np.exp(-lambda2 * (t - u)) * (u + 1.0) ** -tau_gamma)

    envelope = np.empty_like(t_grid)
    forced = 0.0
    previous = 0.0
    for i, t in enumerate(t_grid):
        if t > previous:
            piece, _ = integrate.quad(kernel, previous, t, args=(t,), limit=200)
            forced = float(np.exp(-lambda2 * (t - previous))) * forced + piece
        envelope[i] = homogeneous_decay(g, x0, d, t) + constant * forced
        previous = t
    logger.debug(
        "Consensus envelope with C=%.4g tau_gamma=%.4f lambda2=%.4f",
        constant,
        tau_gamma,
        lambda2,
    )
    return envelope
