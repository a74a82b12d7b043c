import logging
from typing import Optional

import numpy as np
from scipy import integrate

from ..constants import TAIL_CUTOFF
from ..exceptions import ForcingTailError, ManifoldError
from .models import ForcingValue, LinearizedSystem

__all__ = (
    "nonlinear_residual",
    "nonlinear_series",
    "lipschitz_estimate",
    "stable_convolution",
    "unstable_convolution",
    "forcing_term",
    "forcing_series",
)

logger = logging.getLogger(__name__)

LIPSCHITZ_NODES = 25


def _nonlinear_at(system: LinearizedSystem, z: np.ndarray, i: int) -> np.ndarray:
    frame = system.frames[i]
    y = frame.T @ z
    g = system.g_values[i]
    # F(0, t) = 0 exactly: the equilibrium gradient is subtracted, not re-solved
    taylor = system.base_gradients[i] + system.base_hessians[i] @ y
    f = -(system.path.h.gradient(y + g) - taylor)
    return frame @ f + system.frame_derivatives[i] @ y


def nonlinear_residual(
    system: LinearizedSystem, z: np.ndarray, t: float
) -> np.ndarray:
    """F̃(z, t) = U F(Uᵀz) + U̇Uᵀz at a grid node t."""
    z = np.asarray(z, dtype=float)
    if system.radius is not None and np.linalg.norm(z) > system.radius * (1 + 1e-9):
        raise ManifoldError(
            f"|z|={np.linalg.norm(z):.4g} is outside the ball of radius {system.radius}"
        )
    return _nonlinear_at(system, z, system.node(t))


def nonlinear_series(system: LinearizedSystem, u: np.ndarray) -> np.ndarray:
    """F̃ along a grid function u of shape (nodes, M)."""
    return np.array([_nonlinear_at(system, u[i], i) for i in range(len(system.times))])


def _ball_points(
    rng: np.random.Generator, dim: int, radius: float, count: int
) -> np.ndarray:
    directions = rng.standard_normal((count, dim))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    radii = radius * rng.uniform(size=count) ** (1.0 / dim)
    # half of the points sit on the sphere where the quotient peaks
    radii[: count // 2] = radius
    return directions * radii[:, None]


def lipschitz_estimate(
    system: LinearizedSystem, radius: float, samples: int = 64
) -> float:
    """Largest sampled quotient ‖F̃(z) − F̃(ẑ)‖/‖z − ẑ‖ on the radius ball."""
    rng = np.random.default_rng(0)
    size = len(system.times)
    nodes = np.unique(np.linspace(0, size - 1, min(LIPSCHITZ_NODES, size)).astype(int))
    dim = system.dimension
    epsilon = 0.0
    for i in nodes:
        first = _ball_points(rng, dim, radius, samples)
        second = _ball_points(rng, dim, radius, samples)
        second[: samples // 4] = 0.0
        for z, z_hat in zip(first, second):
            gap = np.linalg.norm(z - z_hat)
            if gap < 1e-12:
                continue
            change = _nonlinear_at(system, z, i) - _nonlinear_at(system, z_hat, i)
            epsilon = max(epsilon, float(np.linalg.norm(change) / gap))
    logger.debug("Sampled Lipschitz quotient on r=%.4g: %.4g", radius, epsilon)
    return epsilon


def stable_convolution(system: LinearizedSystem, g: np.ndarray) -> np.ndarray:
    """∫_{t₀}^t V^s(t,τ) G(τ) dτ on the grid by recursive trapezoids."""
    k = system.k
    out = np.zeros_like(g)
    steps = np.diff(system.times)
    decay = np.exp(np.diff(system.cumulative[:, :k], axis=0))
    for i, h in enumerate(steps):
        out[i + 1, :k] = decay[i] * out[i, :k] + 0.5 * h * (
            decay[i] * g[i, :k] + g[i + 1, :k]
        )
    return out


def unstable_convolution(system: LinearizedSystem, g: np.ndarray) -> np.ndarray:
    """∫_t^{t_end} V^u(t,τ) G(τ) dτ on the grid, swept back from the horizon."""
    k = system.k
    out = np.zeros_like(g)
    steps = np.diff(system.times)
    decay = np.exp(-np.diff(system.cumulative[:, k:], axis=0))
    for i in range(len(steps) - 1, -1, -1):
        out[i, k:] = decay[i] * out[i + 1, k:] + 0.5 * steps[i] * (
            g[i, k:] + decay[i] * g[i + 1, k:]
        )
    return out


def _check_tail(norms: np.ndarray) -> None:
    quarter = norms[3 * len(norms) // 4 :]
    if quarter[-1] > TAIL_CUTOFF and quarter[-1] > quarter[0] * (1 + 1e-9):
        raise ForcingTailError(
            f"|w| grows from {quarter[0]:.3e} to {quarter[-1]:.3e} at the end of "
            "the grid; the penalty weight schedule does not settle"
        )


def _tail_bound(system: LinearizedSystem, norms: np.ndarray, t: float) -> float:
    if system.p == 0:
        return 0.0
    span = system.times[-1] - t
    return float(system.K * norms[-1] * np.exp(-system.sigma * span) / system.sigma)


def forcing_term(
    system: LinearizedSystem, t: float, limit: Optional[int] = None
) -> ForcingValue:
    """c(t) = −∫_{t₀}^t V^s(t,τ) w dτ + ∫_t^∞ V^u(t,τ) w dτ by adaptive quadrature.

    The integrands are the grid values of w and ∫Λ interpolated linearly; the
    unstable tail is cut at the end of the grid with its bound recorded.
    """
    times = system.times
    if not times[0] <= t <= times[-1]:
        raise ManifoldError(f"t={t} outside the linearization grid")
    w = system.forcing_terms()
    norms = np.linalg.norm(w, axis=1)
    _check_tail(norms)
    limit = limit or max(50, len(times))
    value = np.zeros(system.dimension)
    for j in range(system.dimension):
        if not np.any(w[:, j]):
            continue
        at_t = np.interp(t, times, system.cumulative[:, j])

        def integrand(tau: float, j: int = j, at_t: float = at_t) -> float:
            exponent = at_t - np.interp(tau, times, system.cumulative[:, j])
            return float(np.exp(exponent) * np.interp(tau, times, w[:, j]))

        if j < system.k:
            if t > times[0]:
                part, _ = integrate.quad(integrand, times[0], t, limit=limit)
                value[j] = -part
        elif t < times[-1]:
            part, _ = integrate.quad(integrand, t, times[-1], limit=limit)
            value[j] = part
    return ForcingValue(t=t, value=value, tail_bound=_tail_bound(system, norms, t))


def forcing_series(system: LinearizedSystem) -> np.ndarray:
    """c on every grid node, by the same trapezoid recursions as the solver."""
    w = system.forcing_terms()
    _check_tail(np.linalg.norm(w, axis=1))
    return -stable_convolution(system, w) + unstable_convolution(system, w)
