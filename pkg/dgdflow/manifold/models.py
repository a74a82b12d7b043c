import dataclasses
from typing import Optional, Tuple

import numpy as np

from ..exceptions import ManifoldError
from ..objective.interface import IStackedObjective


@dataclasses.dataclass(eq=False)
class PenalizedPath:
    """Zeros g(β) of ∇h(x) + βQx tracked along an increasing β grid."""

    h: IStackedObjective
    q: np.ndarray
    beta_grid: np.ndarray
    g_values: np.ndarray
    g_prime: np.ndarray
    target: np.ndarray
    residuals: np.ndarray

    def at(self, beta: float) -> Tuple[np.ndarray, np.ndarray]:
        """g(β) and g′(β), cubic Hermite between grid nodes."""
        grid = self.beta_grid
        if not grid[0] * (1 - 1e-12) <= beta <= grid[-1] * (1 + 1e-12):
            raise ManifoldError(
                f"beta={beta:.6g} outside the path grid [{grid[0]:.6g}, {grid[-1]:.6g}]"
            )
        i = int(np.searchsorted(grid, beta))
        if i < len(grid) and np.isclose(grid[i], beta, rtol=1e-13, atol=0.0):
            return self.g_values[i], self.g_prime[i]
        i = min(max(i, 1), len(grid) - 1)
        b0, b1 = grid[i - 1], grid[i]
        h = b1 - b0
        s = (beta - b0) / h
        g0, g1 = self.g_values[i - 1], self.g_values[i]
        d0, d1 = self.g_prime[i - 1] * h, self.g_prime[i] * h
        value = (
            (2 * s**3 - 3 * s**2 + 1) * g0
            + (s**3 - 2 * s**2 + s) * d0
            + (-2 * s**3 + 3 * s**2) * g1
            + (s**3 - s**2) * d1
        )
        slope = (
            (6 * s**2 - 6 * s) * g0
            + (3 * s**2 - 4 * s + 1) * d0
            + (-6 * s**2 + 6 * s) * g1
            + (3 * s**2 - 2 * s) * d1
        ) / h
        return value, slope

    @property
    def distances(self) -> np.ndarray:
        return np.linalg.norm(self.g_values - self.target, axis=1)


@dataclasses.dataclass(eq=False)
class LinearizedSystem:
    """Diagonalized linearization ż = Λ(t) z + F̃(z, t) − w(t) on a time grid.

    Rows of ``frames[i]`` are the aligned eigenvectors of A(t_i), so
    z = U(t) y. The first ``k`` coordinates are stable.
    """

    path: PenalizedPath
    times: np.ndarray
    betas: np.ndarray
    beta_dots: np.ndarray
    g_values: np.ndarray
    g_primes: np.ndarray
    a_matrices: np.ndarray
    frames: np.ndarray
    frame_derivatives: np.ndarray
    eigenvalues: np.ndarray
    cumulative: np.ndarray
    base_gradients: np.ndarray
    base_hessians: np.ndarray
    k: int
    alpha_rate: float
    sigma: float
    K: float
    epsilon: Optional[float] = None
    radius: Optional[float] = None

    @property
    def dimension(self) -> int:
        return self.eigenvalues.shape[1]

    @property
    def p(self) -> int:
        return self.dimension - self.k

    @property
    def start(self) -> float:
        return float(self.times[0])

    @property
    def horizon(self) -> float:
        return float(self.times[-1] - self.times[0])

    @property
    def contraction_bound(self) -> float:
        """2εK/σ, the contraction factor bound of the integral map."""
        if self.epsilon is None:
            raise ManifoldError("system is not calibrated on a ball yet")
        return 2.0 * self.epsilon * self.K / self.sigma

    def node(self, t: float) -> int:
        i = int(np.argmin(np.abs(self.times - t)))
        if not np.isclose(self.times[i], t, rtol=1e-12, atol=1e-12):
            raise ManifoldError(f"t={t} is not a node of the time grid")
        return i

    def forcing_terms(self) -> np.ndarray:
        """w(t_i) = U(t_i) g′(β_i) β̇_i at every node."""
        w = np.einsum("kij,kj->ki", self.frames, self.g_primes)
        return w * self.beta_dots[:, None]

    def restrict(self, t0: float, t_end: float) -> "LinearizedSystem":
        i0, i1 = self.node(t0), self.node(t_end)
        if i1 - i0 < 2:
            raise ManifoldError("a restricted system needs at least three nodes")
        window = slice(i0, i1 + 1)
        return dataclasses.replace(
            self,
            times=self.times[window],
            betas=self.betas[window],
            beta_dots=self.beta_dots[window],
            g_values=self.g_values[window],
            g_primes=self.g_primes[window],
            a_matrices=self.a_matrices[window],
            frames=self.frames[window],
            frame_derivatives=self.frame_derivatives[window],
            eigenvalues=self.eigenvalues[window],
            cumulative=self.cumulative[window] - self.cumulative[i0],
            base_gradients=self.base_gradients[window],
            base_hessians=self.base_hessians[window],
        )


@dataclasses.dataclass(eq=False)
class ForcingValue:
    t: float
    value: np.ndarray
    tail_bound: float


@dataclasses.dataclass(eq=False)
class StableSolution:
    a_s: np.ndarray
    times: np.ndarray
    u: np.ndarray
    picard_iters: int
    contraction_ratio: float
    residual: float
    ode_residual: float
    tail_bound: float

    @property
    def sup_norm(self) -> float:
        return float(np.max(np.linalg.norm(self.u, axis=1)))


@dataclasses.dataclass(eq=False)
class ManifoldChart:
    base_time: float
    k: int
    samples: np.ndarray
    psi_values: np.ndarray
    points: np.ndarray
    frame: np.ndarray
    offset: np.ndarray
    contraction_ratios: np.ndarray
    residuals: np.ndarray

    @property
    def dimension(self) -> int:
        return self.k

    def to_state(self, z: np.ndarray) -> np.ndarray:
        """x = U(t₀)ᵀ z + g(β_{t₀})."""
        return self.frame.T @ z + self.offset


@dataclasses.dataclass(frozen=True)
class ShotResult:
    s: float
    final_projection: float
    max_distance: float
    final_distance: float


@dataclasses.dataclass(eq=False)
class ProbeResult:
    s_star: float
    bracket: Tuple[float, float]
    shots: Tuple[ShotResult, ...]
    at_boundary: ShotResult
    below: ShotResult
    above: ShotResult
    below_state: np.ndarray
    above_state: np.ndarray
    t0: float = 0.0
    horizon: float = 0.0

    @property
    def end_time(self) -> float:
        return self.t0 + self.horizon

    @property
    def width(self) -> float:
        return self.bracket[1] - self.bracket[0]


@dataclasses.dataclass(frozen=True)
class ChartCheck:
    sample: Tuple[float, ...]
    max_distance: float
    perturbed_final_distance: float
