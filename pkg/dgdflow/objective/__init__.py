from .interface import ILocalObjective, IStackedObjective
from .models import (
    CriticalKind,
    HessianClass,
    ObjectiveSet,
    QuadraticForm,
    SeparableObjective,
    classify_hessian,
    classify_matrix,
)
from .presets import PRESETS, make_preset

__all__ = (
    "ILocalObjective",
    "IStackedObjective",
    "CriticalKind",
    "HessianClass",
    "ObjectiveSet",
    "QuadraticForm",
    "SeparableObjective",
    "classify_hessian",
    "classify_matrix",
    "PRESETS",
    "make_preset",
)
