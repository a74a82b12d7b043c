from .chart import build_chart, chart_consistency, unstable_growth
from .forcing import (
    forcing_series,
    forcing_term,
    lipschitz_estimate,
    nonlinear_residual,
    nonlinear_series,
)
from .linearization import calibrate, estimate_k, linearize, transition_factor
from .models import (
    ChartCheck,
    ForcingValue,
    LinearizedSystem,
    ManifoldChart,
    PenalizedPath,
    ProbeResult,
    ShotResult,
    StableSolution,
)
from .path import critical_path
from .picard import sample_stable_coordinates, solve_stable_solution
from .probe import shooting_probe
from .setup import SaddleProblem, shot_options

__all__ = (
    "build_chart",
    "chart_consistency",
    "unstable_growth",
    "forcing_series",
    "forcing_term",
    "lipschitz_estimate",
    "nonlinear_residual",
    "nonlinear_series",
    "calibrate",
    "estimate_k",
    "linearize",
    "transition_factor",
    "ChartCheck",
    "ForcingValue",
    "LinearizedSystem",
    "ManifoldChart",
    "PenalizedPath",
    "ProbeResult",
    "ShotResult",
    "StableSolution",
    "critical_path",
    "sample_stable_coordinates",
    "solve_stable_solution",
    "shooting_probe",
    "SaddleProblem",
    "shot_options",
)
