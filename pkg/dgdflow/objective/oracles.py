import dataclasses
from typing import Callable

import numpy as np

from .interface import ILocalObjective

__all__ = (
    "OracleReport",
    "central_gradient",
    "central_hessian",
    "gradient_check",
    "hessian_check",
)

FD_STEP = 1e-5


@dataclasses.dataclass(frozen=True)
class OracleReport:
    points: int
    max_relative_error: float
    max_asymmetry: float = 0.0

    def passed(self, tol: float) -> bool:
        return self.max_relative_error < tol


def central_gradient(
    fn: Callable[[np.ndarray], float], a: np.ndarray, step: float = FD_STEP
) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    out = np.empty_like(a)
    for i in range(a.size):
        e = np.zeros_like(a)
        e[i] = step
        out[i] = (fn(a + e) - fn(a - e)) / (2.0 * step)
    return out


def central_hessian(
    grad: Callable[[np.ndarray], np.ndarray], a: np.ndarray, step: float = FD_STEP
) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    columns = []
    for i in range(a.size):
        e = np.zeros_like(a)
        e[i] = step
        columns.append((grad(a + e) - grad(a - e)) / (2.0 * step))
    return np.column_stack(columns)


def _relative(error: float, reference: float) -> float:
    return error / max(reference, 1.0)


def gradient_check(
    f: ILocalObjective, points: np.ndarray, step: float = FD_STEP
) -> OracleReport:
    worst = 0.0
    for a in points:
        exact = f.gradient(a)
        approx = central_gradient(f.value, a, step)
        error = float(np.linalg.norm(exact - approx))
        worst = max(worst, _relative(error, float(np.linalg.norm(exact))))
    return OracleReport(points=len(points), max_relative_error=worst)


def hessian_check(
    f: ILocalObjective, points: np.ndarray, step: float = FD_STEP
) -> OracleReport:
    worst = 0.0
    asymmetry = 0.0
    for a in points:
        exact = f.hessian(a)
        approx = central_hessian(f.gradient, a, step)
        error = float(np.linalg.norm(exact - approx))
        worst = max(worst, _relative(error, float(np.linalg.norm(exact))))
        asymmetry = max(asymmetry, float(np.max(np.abs(exact - exact.T))))
    return OracleReport(
        points=len(points), max_relative_error=worst, max_asymmetry=asymmetry
    )
