from typing import Callable

import numpy as np
import pytest

Field = Callable[[float, np.ndarray], np.ndarray]


@pytest.fixture()
def decay() -> Field:
    return lambda t, x: -x


@pytest.fixture()
def x0() -> np.ndarray:
    return np.array([1.0, -0.5])


@pytest.fixture()
def forced() -> Field:
    # ẋ = cos t − x, x(t) = ½(cos t + sin t) + (x₀ − ½) e^{−t}
    return lambda t, x: np.cos(t) - x
