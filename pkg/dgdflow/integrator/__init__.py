from .models import DenseSegment, Termination, TerminationKind, Trajectory
from .runge_kutta import (
    OrderReport,
    adaptive_accuracy,
    integrate,
    integrate_until,
    order_check,
)
from .settings import IntegratorMethod, IntegratorOptions

__all__ = (
    "DenseSegment",
    "Termination",
    "TerminationKind",
    "Trajectory",
    "OrderReport",
    "adaptive_accuracy",
    "integrate",
    "integrate_until",
    "order_check",
    "IntegratorMethod",
    "IntegratorOptions",
)
