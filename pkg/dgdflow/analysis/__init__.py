from .basins import monte_carlo_basins
from .consensus import (
    consensus_bound_envelope,
    consensus_residual,
    gradient_bound,
    homogeneous_decay,
)
from .critical_points import classify_limit, find_critical_points
from .models import (
    BasinStats,
    ConsensusReport,
    CriticalPoint,
    CriticalPointAtlas,
    DescentReport,
    PerturbationReport,
    TrialOutcome,
)
from .perturbation import descent_violations, perturbation_residual
from .simulation import SimulationSetup

__all__ = (
    "monte_carlo_basins",
    "consensus_bound_envelope",
    "consensus_residual",
    "gradient_bound",
    "homogeneous_decay",
    "classify_limit",
    "find_critical_points",
    "BasinStats",
    "ConsensusReport",
    "CriticalPoint",
    "CriticalPointAtlas",
    "DescentReport",
    "PerturbationReport",
    "TrialOutcome",
    "descent_violations",
    "perturbation_residual",
    "SimulationSetup",
)
