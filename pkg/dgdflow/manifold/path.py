import logging

import numpy as np

from ..constants import TOL_NEWTON
from ..exceptions import ManifoldError, NewtonDivergence
from ..objective.interface import IStackedObjective
from .models import PenalizedPath

__all__ = ("critical_path",)

logger = logging.getLogger(__name__)

NEWTON_STEPS = 50


def _newton(
    h: IStackedObjective,
    q: np.ndarray,
    beta: float,
    start: np.ndarray,
    tol: float,
) -> np.ndarray:
    g = start.copy()
    for _ in range(NEWTON_STEPS):
        residual = h.gradient(g) + beta * (q @ g)
        if np.linalg.norm(residual) < tol:
            return g
        try:
            step = np.linalg.solve(h.hessian(g) + beta * q, residual)
        except np.linalg.LinAlgError as e:
            raise NewtonDivergence(
                f"singular penalized Hessian at beta={beta:.6g}", beta
            ) from e
        g = g - step
        if not np.all(np.isfinite(g)):
            break
    raise NewtonDivergence(f"Newton did not converge at beta={beta:.6g}", beta)


def critical_path(
    h: IStackedObjective,
    q: np.ndarray,
    x_star: np.ndarray,
    beta_grid: np.ndarray,
    tol: float = TOL_NEWTON,
) -> PenalizedPath:
    """Track g(β) with ∇h(g) + βQg = 0 by continuation from the largest β.

    g′ = dg/dβ comes from implicit differentiation, (∇²h + βQ) g′ = −Qg, and
    doubles as the predictor for the next smaller β.
    """
    beta_grid = np.asarray(beta_grid, dtype=float)
    if beta_grid.ndim != 1 or len(beta_grid) < 2:
        raise ManifoldError("the beta grid needs at least two values")
    if np.any(np.diff(beta_grid) <= 0) or beta_grid[0] <= 0:
        raise ManifoldError("the beta grid must be positive and increasing")
    q = np.asarray(q, dtype=float)
    x_star = np.asarray(x_star, dtype=float)
    size = len(beta_grid)
    g_values = np.empty((size, h.dimension))
    g_prime = np.empty_like(g_values)
    residuals = np.empty(size)
    guess = x_star.copy()
    previous_beta = beta_grid[-1]
    for i in range(size - 1, -1, -1):
        beta = beta_grid[i]
        if i < size - 1:
            guess = g_values[i + 1] + g_prime[i + 1] * (beta - previous_beta)
        g = _newton(h, q, beta, guess, tol)
        g_values[i] = g
        g_prime[i] = np.linalg.solve(h.hessian(g) + beta * q, -(q @ g))
        residuals[i] = np.linalg.norm(h.gradient(g) + beta * (q @ g))
        previous_beta = beta
    logger.debug(
        "Penalized path on beta in [%.4g, %.4g]: max residual %.2e, "
        "distance to target %.3e -> %.3e",
        beta_grid[0],
        beta_grid[-1],
        residuals.max(),
        np.linalg.norm(g_values[0] - x_star),
        np.linalg.norm(g_values[-1] - x_star),
    )
    return PenalizedPath(
        h=h,
        q=q,
        beta_grid=beta_grid,
        g_values=g_values,
        g_prime=g_prime,
        target=x_star,
        residuals=residuals,
    )
