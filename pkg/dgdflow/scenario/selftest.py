"""Numerical oracles run before trusting any experiment output."""
import dataclasses
import logging
from typing import Callable, List, Tuple

import networkx as nx
import numpy as np

from ..dynamics.fields import FieldForm, dgd_field
from ..dynamics.schedule import Clock, PowerWeight, Schedule, time_change
from ..graph import graph_from_preset, laplacian
from ..integrator.runge_kutta import order_check
from ..manifold.linearization import linearize, transition_factor
from ..manifold.path import critical_path
from ..objective.models import QuadraticForm
from ..objective.oracles import gradient_check, hessian_check
from ..objective.presets import PRESETS, make_preset

__all__ = (
    "SelftestCheck",
    "SelftestReport",
    "run_selftest",
)

logger = logging.getLogger(__name__)

ORACLE_POINTS = 50
TOL_DERIVATIVE = 1e-5
TOL_LAMBDA2 = 1e-9
TOL_ROUND_TRIP = 1e-8
ORDER_RANGE = (3.8, 4.2)
TOL_FIELD_FORMS = 1e-12
TOL_TRANSITION = 1e-9


@dataclasses.dataclass(frozen=True)
class SelftestCheck:
    name: str
    value: float
    threshold: str
    passed: bool


@dataclasses.dataclass(frozen=True)
class SelftestReport:
    checks: Tuple[SelftestCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> List[SelftestCheck]:
        return [c for c in self.checks if not c.passed]


def _below(name: str, value: float, tol: float) -> SelftestCheck:
    return SelftestCheck(name, value, f"< {tol:g}", bool(value < tol))


def _derivative_checks(rng: np.random.Generator) -> List[SelftestCheck]:
    checks = []
    for name in sorted(PRESETS):
        obj = make_preset(name, agents=3, dimension=2, heterogeneity_seed=1)
        points = rng.uniform(-2.0, 2.0, size=(ORACLE_POINTS, obj.dimension))
        gradient = max(gradient_check(f, points).max_relative_error for f in obj.locals)
        hessian = max(hessian_check(f, points).max_relative_error for f in obj.locals)
        checks.append(_below(f"gradient[{name}]", gradient, TOL_DERIVATIVE))
        checks.append(_below(f"hessian[{name}]", hessian, TOL_DERIVATIVE))
    return checks


def _lambda2_checks(rng: np.random.Generator) -> List[SelftestCheck]:
    worst = 0.0
    for preset in ("path", "ring", "complete", "star"):
        for nodes in (2, 3, 4):
            g = graph_from_preset(preset, nodes)
            brute = nx.laplacian_matrix(g.to_networkx(), nodelist=range(1, nodes + 1))
            spectrum = np.sort(np.linalg.eigvals(brute.toarray()).real)
            worst = max(worst, abs(laplacian(g).lambda2 - spectrum[1]))
    return [_below("lambda2", worst, TOL_LAMBDA2)]


def _round_trip_checks(rng: np.random.Generator) -> List[SelftestCheck]:
    s = Schedule(tau_alpha=0.8, tau_beta=0.3)
    taus = np.concatenate([[0.0], rng.uniform(0.0, 1000.0, size=20)])
    checks = []
    for clock in (Clock.ALPHA, Clock.BETA):
        tc = time_change(s, clock)
        worst = max(abs(tc.inverse(tc.forward(tau)) - tau) for tau in taus)
        checks.append(_below(f"time_change[{clock.value}]", worst, TOL_ROUND_TRIP))
    return checks


def _order_checks(rng: np.random.Generator) -> List[SelftestCheck]:
    x0 = np.array([1.0, -0.5])
    report = order_check(
        lambda t, x: -x, lambda t: x0 * np.exp(-t), 0.0, 2.0, (10, 20, 40, 80)
    )
    low, high = ORDER_RANGE
    return [
        SelftestCheck(
            "rk4_order",
            report.slope,
            f"in [{low:g}, {high:g}]",
            bool(low <= report.slope <= high),
        )
    ]


def _field_form_checks(rng: np.random.Generator) -> List[SelftestCheck]:
    g = graph_from_preset("ring", 4)
    obj = make_preset("quartic_saddle", 4, 2, heterogeneity_seed=3)
    s = Schedule(tau_alpha=0.8, tau_beta=0.3)
    kronecker = dgd_field(g, obj, s, FieldForm.KRONECKER)
    agents = dgd_field(g, obj, s, FieldForm.AGENTS)
    worst = 0.0
    for t in (0.0, 1.0, 10.0, 250.0):
        x = rng.uniform(-2.0, 2.0, size=obj.stacked_dimension)
        worst = max(worst, float(np.max(np.abs(kronecker(t, x) - agents(t, x)))))
    return [_below("field_forms", worst, TOL_FIELD_FORMS)]


def _transition_checks(rng: np.random.Generator) -> List[SelftestCheck]:
    h = QuadraticForm(np.diag([2.0, -1.0]))
    weight = PowerWeight()
    times = np.linspace(0.0, 1.0, 101)
    betas = np.geomspace(weight.value(times[0]), weight.value(times[-1]), 50)
    path = critical_path(h, np.zeros((2, 2)), np.zeros(2), betas)
    system = linearize(path, weight, times)
    factor = transition_factor(system, 1.0, 0.0, "stable")
    expected = np.diag([np.exp(-2.0), 0.0])
    error = float(np.max(np.abs(factor - expected)))
    return [_below("linear_transition", error, TOL_TRANSITION)]


CHECKS: Tuple[Callable[[np.random.Generator], List[SelftestCheck]], ...] = (
    _derivative_checks,
    _lambda2_checks,
    _round_trip_checks,
    _order_checks,
    _field_form_checks,
    _transition_checks,
)


def run_selftest(seed: int = 0) -> SelftestReport:
    rng = np.random.default_rng(seed)
    checks: List[SelftestCheck] = []
    for group in CHECKS:
        checks.extend(group(rng))
    for check in checks:
        log = logger.info if check.passed else logger.error
        log("selftest %s = %.3e (%s)", check.name, check.value, check.threshold)
    return SelftestReport(tuple(checks))
