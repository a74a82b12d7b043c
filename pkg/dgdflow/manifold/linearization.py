import logging
from typing import List, Optional, Tuple

import numpy as np
from scipy import integrate, linalg

from ..dynamics.schedule import IPenaltyWeight
from ..exceptions import (
    AlignmentError,
    ContractionConstantsError,
    EigenvalueSignChange,
    ManifoldError,
)
from .forcing import lipschitz_estimate
from .models import LinearizedSystem, PenalizedPath

__all__ = (
    "linearize",
    "transition_factor",
    "estimate_k",
    "calibrate",
)

logger = logging.getLogger(__name__)

MIN_OVERLAP = 0.5
CLUSTER_TOL = 1e-9
ZERO_EIGENVALUE = 1e-12


def _clusters(values: np.ndarray) -> List[List[int]]:
    scale = max(1.0, float(np.max(np.abs(values))))
    groups: List[List[int]] = []
    for j in np.argsort(values):
        if groups and abs(values[j] - values[groups[-1][-1]]) < CLUSTER_TOL * scale:
            groups[-1].append(int(j))
        else:
            groups.append([int(j)])
    return groups


def _align(
    previous: np.ndarray, values: np.ndarray, vectors: np.ndarray, t: float
) -> Tuple[np.ndarray, np.ndarray]:
    """Reorder and re-sign eigenvector columns to follow the previous node."""
    size = len(values)
    work = np.abs(previous.T @ vectors)
    order = np.empty(size, dtype=int)
    for _ in range(size):
        i, j = np.unravel_index(int(np.argmax(work)), work.shape)
        order[i] = j
        work[i, :] = -1.0
        work[:, j] = -1.0
    values, vectors = values[order], vectors[:, order].copy()
    for cluster in _clusters(values):
        if len(cluster) > 1:
            rotation, _ = linalg.orthogonal_procrustes(
                vectors[:, cluster], previous[:, cluster]
            )
            vectors[:, cluster] = vectors[:, cluster] @ rotation
    overlaps = np.sum(previous * vectors, axis=0)
    signs = np.where(overlaps < 0, -1.0, 1.0)
    vectors *= signs
    worst = float(np.min(np.abs(overlaps)))
    if worst < MIN_OVERLAP:
        raise AlignmentError(
            f"eigenbasis alignment is ambiguous at t={t:.6g} (overlap {worst:.3f}); "
            "refine the time grid"
        )
    return values, vectors


def _max_rise(d: np.ndarray) -> float:
    """max over i <= j of d[j] − d[i]."""
    return float(np.max(d - np.minimum.accumulate(d)))


def estimate_k(
    times: np.ndarray,
    cumulative: np.ndarray,
    k: int,
    alpha_rate: float,
    sigma: float,
) -> float:
    """Smallest K >= 1 with the exponential estimates holding on all grid pairs."""
    worst = 0.0
    for j in range(cumulative.shape[1]):
        if j < k:
            # ‖V^s(t₂,t₁)‖ e^{(α+σ)(t₂−t₁)} for t₂ >= t₁
            shifted = cumulative[:, j] + (alpha_rate + sigma) * times
            worst = max(worst, _max_rise(shifted))
        else:
            # ‖V^u(t₂,t₁)‖ e^{σ(t₁−t₂)} for t₂ <= t₁
            worst = max(worst, _max_rise(-(cumulative[:, j] - sigma * times)))
    return max(1.0, float(np.exp(worst)))


def linearize(
    path: PenalizedPath,
    weight: IPenaltyWeight,
    t_grid: np.ndarray,
    radius: Optional[float] = None,
) -> LinearizedSystem:
    """Linearize the penalized flow around g(β_t) and diagonalize it.

    A(t) = −(∇²h(g(β_t)) + β_t Q) is the Jacobian of the flow, so stable
    eigenvalues are negative. Eigenvectors are aligned node to node and the
    sign of every branch must stay fixed along the grid.
    """
    times = np.asarray(t_grid, dtype=float)
    if len(times) < 3 or np.any(np.diff(times) <= 0):
        raise ManifoldError("the time grid needs three or more increasing nodes")
    size, dim = len(times), path.h.dimension
    betas = np.array([weight.value(t) for t in times])
    beta_dots = np.array([weight.derivative(t) for t in times])
    g_values = np.empty((size, dim))
    g_primes = np.empty((size, dim))
    a_matrices = np.empty((size, dim, dim))
    hessians = np.empty((size, dim, dim))
    frames = np.empty((size, dim, dim))
    eigenvalues = np.empty((size, dim))
    previous: Optional[np.ndarray] = None
    signs: Optional[np.ndarray] = None
    for i, (t, beta) in enumerate(zip(times, betas)):
        g, g_prime = path.at(beta)
        g_values[i], g_primes[i] = g, g_prime
        hessians[i] = path.h.hessian(g)
        a = -(hessians[i] + beta * path.q)
        a = 0.5 * (a + a.T)
        values, vectors = linalg.eigh(a)
        if previous is None:
            order = np.argsort(values)
            values, vectors = values[order], vectors[:, order]
        else:
            values, vectors = _align(previous, values, vectors, t)
        if np.any(np.abs(values) < ZERO_EIGENVALUE):
            raise EigenvalueSignChange(f"an eigenvalue of A vanishes at t={t:.6g}")
        if signs is None:
            signs = np.sign(values)
        elif np.any(np.sign(values) != signs):
            branch = int(np.argmax(np.sign(values) != signs))
            raise EigenvalueSignChange(
                f"eigenvalue branch {branch} changes sign at t={t:.6g}; "
                "start the grid later"
            )
        a_matrices[i] = a
        frames[i] = vectors.T
        eigenvalues[i] = values
        previous = vectors
    k = int(np.sum(eigenvalues[0] < 0))
    frame_derivatives = np.gradient(frames, times, axis=0, edge_order=2)
    cumulative = integrate.cumulative_trapezoid(eigenvalues, times, axis=0, initial=0)
    mu_s = float(np.min(-eigenvalues[:, :k])) if k else np.inf
    mu_u = float(np.min(eigenvalues[:, k:])) if k < dim else np.inf
    if not np.isfinite(min(mu_s, mu_u)):
        raise ManifoldError("the linearization needs stable and unstable directions")
    sigma = 0.5 * min(mu_u, mu_s)
    alpha_rate = 0.9 * (mu_s - sigma)
    big_k = estimate_k(times, cumulative, k, alpha_rate, sigma)
    system = LinearizedSystem(
        path=path,
        times=times,
        betas=betas,
        beta_dots=beta_dots,
        g_values=g_values,
        g_primes=g_primes,
        a_matrices=a_matrices,
        frames=frames,
        frame_derivatives=frame_derivatives,
        eigenvalues=eigenvalues,
        cumulative=cumulative,
        base_gradients=np.array([path.h.gradient(g) for g in g_values]),
        base_hessians=hessians,
        k=k,
        alpha_rate=alpha_rate,
        sigma=sigma,
        K=big_k,
    )
    logger.info(
        "Linearized on [%.4g, %.4g]: k=%s p=%s alpha=%.4g sigma=%.4g K=%.4g",
        times[0],
        times[-1],
        k,
        dim - k,
        alpha_rate,
        sigma,
        big_k,
    )
    if radius is not None:
        return calibrate(system, radius)
    return system


def calibrate(
    system: LinearizedSystem, radius: float, samples: int = 64
) -> LinearizedSystem:
    """Measure ε on the ball of the given radius and check ε < σ/(6K)."""
    if radius <= 0:
        raise ManifoldError(f"ball radius must be positive, got {radius}")
    epsilon = lipschitz_estimate(system, radius, samples)
    limit = system.sigma / (6.0 * system.K)
    if epsilon >= limit:
        raise ContractionConstantsError(
            f"epsilon={epsilon:.4g} is not below sigma/(6K)={limit:.4g}; "
            "shrink the radius or start later"
        )
    system.epsilon = epsilon
    system.radius = radius
    logger.info(
        "Calibrated ball r=%.4g: epsilon=%.4g, 2eK/s=%.4g",
        radius,
        epsilon,
        system.contraction_bound,
    )
    return system


def transition_factor(
    system: LinearizedSystem, t2: float, t1: float, which: str
) -> np.ndarray:
    """V^s(t₂,t₁) or V^u(t₂,t₁): diagonal exponentials of ∫_{t₁}^{t₂} Λ."""
    if which == "stable":
        if t2 < t1:
            raise ManifoldError("the stable factor needs t2 >= t1")
        coords = slice(0, system.k)
    elif which == "unstable":
        if t2 > t1:
            raise ManifoldError("the unstable factor needs t2 <= t1")
        coords = slice(system.k, system.dimension)
    else:
        raise ManifoldError(f"unknown splitting {which!r}")
    for t in (t1, t2):
        if not system.times[0] - 1e-12 <= t <= system.times[-1] + 1e-12:
            raise ManifoldError(f"t={t} outside the linearization grid")
    exponent = np.array(
        [
            np.interp(t2, system.times, system.cumulative[:, j])
            - np.interp(t1, system.times, system.cumulative[:, j])
            for j in range(system.dimension)
        ]
    )
    diagonal = np.zeros(system.dimension)
    diagonal[coords] = np.exp(exponent[coords])
    return np.diag(diagonal)
