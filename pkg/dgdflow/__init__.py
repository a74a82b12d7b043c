from .constants import APP_VERSION as __version__
from .dynamics import Clock, Schedule, dgd_field, time_change
from .exceptions import DgdError, ManifoldError, ScenarioError
from .graph import Graph, build_graph, graph_from_preset, laplacian
from .integrator import IntegratorOptions, Trajectory, integrate
from .logging import get_current_run_id
from .objective import ObjectiveSet, make_preset
from .scenario import Scenario, load_scenario, run_scenario, run_selftest

__all__ = (
    "__version__",
    "Clock",
    "Schedule",
    "dgd_field",
    "time_change",
    "DgdError",
    "ManifoldError",
    "ScenarioError",
    "Graph",
    "build_graph",
    "graph_from_preset",
    "laplacian",
    "IntegratorOptions",
    "Trajectory",
    "integrate",
    "get_current_run_id",
    "ObjectiveSet",
    "make_preset",
    "Scenario",
    "load_scenario",
    "run_scenario",
    "run_selftest",
)
