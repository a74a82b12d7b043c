from typing import Protocol

import numpy as np


class ILocalObjective(Protocol):
    """A C² function on R^d with analytic gradient and Hessian oracles."""

    dimension: int

    def value(self, a: np.ndarray) -> float:
        pass

    def gradient(self, a: np.ndarray) -> np.ndarray:
        pass

    def hessian(self, a: np.ndarray) -> np.ndarray:
        pass


class IStackedObjective(Protocol):
    """A function h on R^M, M = N*d, with gradient and Hessian oracles."""

    dimension: int

    def value(self, x: np.ndarray) -> float:
        pass

    def gradient(self, x: np.ndarray) -> np.ndarray:
        pass

    def hessian(self, x: np.ndarray) -> np.ndarray:
        pass
