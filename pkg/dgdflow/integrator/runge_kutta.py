"""Explicit Runge–Kutta integration of non-autonomous systems ẋ = F(t, x).

Two methods are provided: the Dormand–Prince 5(4) pair with step-size control
and its 4th-order continuous extension, and the classical fixed-step RK4 with
cubic Hermite dense output. Events are checked at step granularity.
"""
import dataclasses
import logging
import math
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from ..exceptions import IntegratorError, ValidityBoxError
from ..typedefs import StopPredicate
from .models import DenseSegment, Termination, TerminationKind, Trajectory
from .settings import IntegratorMethod, IntegratorOptions

__all__ = (
    "integrate",
    "integrate_until",
    "order_check",
    "adaptive_accuracy",
    "OrderReport",
)

logger = logging.getLogger(__name__)

Field = Callable[[float, np.ndarray], np.ndarray]

# Dormand–Prince 5(4)
C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
A = [
    np.array([]),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
    np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]),
]
B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
B_HAT = np.array(
    [
        5179 / 57600,
        0.0,
        7571 / 16695,
        393 / 640,
        -92097 / 339200,
        187 / 2100,
        1 / 40,
    ]
)
E = B - B_HAT
# continuous extension, y(t_old + θh) = y_old + h Kᵀ P [θ, θ², θ³, θ⁴]
P = np.array(
    [
        [
            1.0,
            -8048581381 / 2820520608,
            8663915743 / 2820520608,
            -12715105075 / 11282082432,
        ],
        [0.0, 0.0, 0.0, 0.0],
        [
            0.0,
            131558114200 / 32700410799,
            -68118460800 / 10900136933,
            87487479700 / 32700410799,
        ],
        [
            0.0,
            -1754552775 / 470086768,
            14199869525 / 1410260304,
            -10690763975 / 1880347072,
        ],
        [
            0.0,
            127303824393 / 49829197408,
            -318862633887 / 49829197408,
            701980252875 / 199316789632,
        ],
        [
            0.0,
            -282668133 / 205662961,
            2019193451 / 616988883,
            -1453857185 / 822651844,
        ],
        [
            0.0,
            40617522 / 29380423,
            -110615467 / 29380423,
            69997945 / 29380423,
        ],
    ]
)

SAFETY = 0.9
MIN_FACTOR = 0.2
MAX_FACTOR = 10.0
ERROR_EXPONENT = -1.0 / 5.0


def _dopri_segment(
    t_old: float, h: float, x_old: np.ndarray, k: np.ndarray
) -> DenseSegment:
    q = k.T @ P

    def evaluate(t: float) -> np.ndarray:
        theta = (t - t_old) / h
        return x_old + h * (q @ np.cumprod([theta] * 4))

    return DenseSegment(t_old, h, evaluate)


def _hermite_segment(
    t_old: float,
    h: float,
    x_old: np.ndarray,
    f_old: np.ndarray,
    x_new: np.ndarray,
    f_new: np.ndarray,
) -> DenseSegment:
    def evaluate(t: float) -> np.ndarray:
        s = (t - t_old) / h
        h00 = 2 * s**3 - 3 * s**2 + 1
        h10 = s**3 - 2 * s**2 + s
        h01 = -2 * s**3 + 3 * s**2
        h11 = s**3 - s**2
        return h00 * x_old + h10 * h * f_old + h01 * x_new + h11 * h * f_new

    return DenseSegment(t_old, h, evaluate)


class _Recorder:
    """Accumulates decimated samples; the last accepted state is always kept."""

    def __init__(self, t0: float, x0: np.ndarray, stride: int) -> None:
        self.stride = stride
        self.times: List[float] = [t0]
        self.states: List[np.ndarray] = [x0.copy()]
        self.pending: Optional[Tuple[float, np.ndarray]] = None
        self.segments: List[DenseSegment] = []
        self.accepted = 0
        self.rejected = 0
        self.evaluations = 0

    def accept(self, t: float, x: np.ndarray) -> None:
        self.accepted += 1
        if self.accepted % self.stride == 0:
            self.times.append(t)
            self.states.append(x.copy())
            self.pending = None
        else:
            self.pending = (t, x.copy())

    def finish(self, termination: Termination) -> Trajectory:
        if self.pending is not None:
            self.times.append(self.pending[0])
            self.states.append(self.pending[1])
        return Trajectory(
            times=np.array(self.times),
            states=np.array(self.states),
            termination=termination,
            accepted_steps=self.accepted,
            rejected_steps=self.rejected,
            field_evaluations=self.evaluations,
            segments=self.segments,
        )


def _error_norm(
    err: np.ndarray, x: np.ndarray, x_new: np.ndarray, opts: IntegratorOptions
) -> float:
    scale = opts.abs_tol + opts.rel_tol * np.maximum(np.abs(x), np.abs(x_new))
    return float(np.sqrt(np.mean((err / scale) ** 2)))


def _box_exit(t: float, x: np.ndarray, radius: Optional[float]) -> Termination:
    return Termination(
        TerminationKind.BOX_EXIT,
        t,
        message=f"step from t={t:.6g} leaves the validity box "
        f"(max |x_i| = {float(np.max(np.abs(x))):.6g} > {radius})",
    )


def _run(
    field: Field,
    x0: np.ndarray,
    t0: float,
    t_end: float,
    opts: IntegratorOptions,
    predicate: Optional[StopPredicate],
    event: str,
) -> Trajectory:
    x = np.array(x0, dtype=float)
    if not np.all(np.isfinite(x)):
        raise IntegratorError("initial state is not finite")
    if not t_end > t0:
        raise IntegratorError(f"need t_end > t0, got t0={t0} t_end={t_end}")
    rec = _Recorder(t0, x, opts.stride)
    inside = getattr(field, "inside", lambda _: True)
    radius = getattr(field, "box_radius", None)
    # the box is enforced on accepted states only; trial stages may leave it
    raw = getattr(field, "fn", field) if hasattr(field, "inside") else field
    if not inside(x):
        return rec.finish(
            Termination(
                TerminationKind.BOX_EXIT, t0, message="initial state outside box"
            )
        )
    if predicate is not None and predicate(t0, x):
        return rec.finish(Termination(TerminationKind.EVENT_FIRED, t0, event=event))

    def evaluate(t: float, y: np.ndarray) -> np.ndarray:
        rec.evaluations += 1
        return np.asarray(raw(t, y), dtype=float)

    adaptive = opts.method == IntegratorMethod.RK45_ADAPTIVE
    t = t0
    h = min(opts.h_init, opts.h_max, t_end - t0)
    steps = 0
    f = evaluate(t, x)
    while t < t_end:
        if steps >= opts.max_steps:
            return rec.finish(
                Termination(
                    TerminationKind.STEP_FAILURE,
                    t,
                    message=f"max_steps={opts.max_steps} exhausted",
                )
            )
        steps += 1
        if adaptive:
            h = min(h, t_end - t)
            k = np.empty((7, x.size))
            k[0] = f
            left_box = False
            try:
                with np.errstate(over="ignore", invalid="ignore"):
                    for i in range(1, 6):
                        k[i] = evaluate(t + C[i] * h, x + h * (A[i] @ k[:i]))
                    # first-same-as-last: the 7th stage is F at the new state
                    x_new = x + h * (A[6] @ k[:6])
                    f_new = evaluate(t + h, x_new)
                    k[6] = f_new
                    err = _error_norm(h * (E @ k), x, x_new, opts)
            except ValidityBoxError as e:
                logger.debug("Trial step from t=%.6g rejected: %s", t, e)
                left_box, err = True, math.inf
            if not np.isfinite(err) or err > 1.0:
                rec.rejected += 1
                factor = MIN_FACTOR
                if np.isfinite(err):
                    factor = max(MIN_FACTOR, SAFETY * err**ERROR_EXPONENT)
                h *= factor
                if h < opts.h_min:
                    if left_box:
                        return rec.finish(_box_exit(t, x, radius))
                    return rec.finish(
                        Termination(
                            TerminationKind.STEP_FAILURE,
                            t,
                            message=f"step size {h:.3e} below h_min",
                        )
                    )
                continue
            t_new = t + h
            factor = MAX_FACTOR if err == 0 else SAFETY * err**ERROR_EXPONENT
            h_next = min(h * min(MAX_FACTOR, max(MIN_FACTOR, factor)), opts.h_max)
        else:
            # nodes t0 + i*h avoid drift over long horizons
            t_new = min(t0 + steps * opts.h_init, t_end)
            if t_end - t_new < 1e-12 * max(1.0, abs(t_end)):
                t_new = t_end
            h = t_new - t
            try:
                k1 = f
                k2 = evaluate(t + h / 2, x + h / 2 * k1)
                k3 = evaluate(t + h / 2, x + h / 2 * k2)
                k4 = evaluate(t_new, x + h * k3)
                x_new = x + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
                f_new = evaluate(t_new, x_new)
            except ValidityBoxError as e:
                logger.debug("Fixed step from t=%.6g left the box: %s", t, e)
                return rec.finish(_box_exit(t, x, radius))
            h_next = opts.h_init
        if not np.all(np.isfinite(x_new)):
            return rec.finish(
                Termination(
                    TerminationKind.STEP_FAILURE, t, message="non-finite state"
                )
            )
        if not inside(x_new):
            logger.debug("Accepted state at t=%.6g is outside the box", t_new)
            return rec.finish(_box_exit(t, x_new, radius))
        if opts.dense_output:
            if adaptive:
                rec.segments.append(_dopri_segment(t, h, x, k))
            else:
                rec.segments.append(_hermite_segment(t, h, x, f, x_new, f_new))
        t, x, f, h = t_new, x_new, f_new, h_next
        rec.accept(t, x)
        if predicate is not None and predicate(t, x):
            return rec.finish(Termination(TerminationKind.EVENT_FIRED, t, event=event))
    return rec.finish(Termination(TerminationKind.HORIZON_REACHED, t))


def integrate(
    field: Field,
    x0: np.ndarray,
    t0: float,
    t_end: float,
    opts: Optional[IntegratorOptions] = None,
) -> Trajectory:
    opts = opts or IntegratorOptions()
    traj = _run(field, x0, t0, t_end, opts, None, "")
    logger.debug(
        "Integrated [%s, %s] with %s: %s, %s accepted, %s rejected",
        t0,
        t_end,
        opts.method.value,
        traj.termination,
        traj.accepted_steps,
        traj.rejected_steps,
    )
    return traj


def integrate_until(
    field: Field,
    x0: np.ndarray,
    t0: float,
    predicate: StopPredicate,
    opts: Optional[IntegratorOptions] = None,
    t_end: float = math.inf,
    name: str = "predicate",
) -> Trajectory:
    """Integrate until the predicate holds at an accepted step.

    Without a finite ``t_end`` only ``max_steps`` bounds the run.
    """
    opts = opts or IntegratorOptions()
    return _run(field, x0, t0, t_end, opts, predicate, name)


@dataclasses.dataclass(frozen=True)
class OrderReport:
    step_counts: Tuple[int, ...]
    errors: Tuple[float, ...]
    slope: float


def order_check(
    field: Field,
    exact: Callable[[float], np.ndarray],
    t0: float,
    t_end: float,
    step_counts: Sequence[int] = (10, 20, 40, 80),
) -> OrderReport:
    """Observed global order of fixed-step RK4 against a known solution."""
    errors = []
    for n in step_counts:
        h = (t_end - t0) / n
        opts = IntegratorOptions(
            method=IntegratorMethod.RK4_FIXED, h_init=h, h_min=min(h, 1e-12), h_max=h
        )
        traj = integrate(field, exact(t0), t0, t_end, opts)
        errors.append(float(np.linalg.norm(traj.final_state - exact(t_end))))
    log_h = np.log([(t_end - t0) / n for n in step_counts])
    slope = float(np.polyfit(log_h, np.log(errors), 1)[0])
    logger.info("Observed order %.3f from errors %s", slope, errors)
    return OrderReport(tuple(step_counts), tuple(errors), slope)


def adaptive_accuracy(
    field: Field,
    x0: np.ndarray,
    t0: float,
    t_end: float,
    tol: float,
    exact: Optional[Callable[[float], np.ndarray]] = None,
) -> float:
    """Achieved-to-requested error ratio of the adaptive method.

    Without an exact solution a run at tolerance 1e-13 is the reference.
    """
    opts = IntegratorOptions(abs_tol=tol, rel_tol=tol)
    final = integrate(field, x0, t0, t_end, opts).final_state
    if exact is not None:
        reference = exact(t_end)
    else:
        tight = IntegratorOptions(abs_tol=1e-13, rel_tol=1e-13, h_init=1e-4)
        reference = integrate(field, x0, t0, t_end, tight).final_state
    scale = 1.0 + float(np.linalg.norm(reference))
    return float(np.linalg.norm(final - reference)) / (tol * scale)
