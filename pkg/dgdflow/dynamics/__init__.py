from .fields import (
    FieldForm,
    FlowField,
    consensus_projection,
    dgd_field,
    penalized_field,
    reclocked_field,
)
from .schedule import (
    Clock,
    ClockRatio,
    IPenaltyWeight,
    PowerWeight,
    Schedule,
    TimeChange,
    fit_ratio_exponent,
    time_change,
)

__all__ = (
    "FieldForm",
    "FlowField",
    "consensus_projection",
    "dgd_field",
    "penalized_field",
    "reclocked_field",
    "Clock",
    "ClockRatio",
    "IPenaltyWeight",
    "PowerWeight",
    "Schedule",
    "TimeChange",
    "fit_ratio_exponent",
    "time_change",
)
