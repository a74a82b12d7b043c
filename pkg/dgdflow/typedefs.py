from typing import Callable, NewType

import numpy as np
import numpy.typing as npt

Vector = npt.NDArray[np.float64]
Matrix = npt.NDArray[np.float64]

NodeId = NewType("NodeId", int)
AtlasId = NewType("AtlasId", int)
RunId = NewType("RunId", str)

VectorField = Callable[[float, Vector], Vector]
StopPredicate = Callable[[float, Vector], bool]
