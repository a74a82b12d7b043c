import dataclasses
import enum
import logging
import math
import operator
import threading
from typing import Callable, Optional, Protocol, Tuple, Union

import cachetools
import numpy as np
from scipy import integrate, optimize

from ..exceptions import ScheduleError

__all__ = (
    "Clock",
    "Schedule",
    "TimeChange",
    "IPenaltyWeight",
    "ClockRatio",
    "PowerWeight",
    "time_change",
    "fit_ratio_exponent",
    "power_antiderivative",
)

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

ADMISSIBLE = "0 <= tau_beta < tau_alpha <= 1"


class Clock(str, enum.Enum):
    ORIGINAL = "original"
    BETA = "beta"
    ALPHA = "alpha"


def _check_time(t: ArrayLike) -> None:
    if np.any(np.asarray(t) < 0):
        raise ScheduleError(f"schedule evaluated at negative time {t}")


@dataclasses.dataclass(frozen=True)
class Schedule:
    """Power-law weights α_t = (t+1)^-τ_α and β_t = (t+1)^-τ_β."""

    tau_alpha: float
    tau_beta: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.tau_beta < self.tau_alpha <= 1.0:
            raise ScheduleError(
                f"tau_alpha={self.tau_alpha}, tau_beta={self.tau_beta} violate "
                f"{ADMISSIBLE}"
            )

    def alpha(self, t: ArrayLike) -> ArrayLike:
        _check_time(t)
        return np.power(np.asarray(t, dtype=float) + 1.0, -self.tau_alpha)

    def beta(self, t: ArrayLike) -> ArrayLike:
        _check_time(t)
        return np.power(np.asarray(t, dtype=float) + 1.0, -self.tau_beta)

    def alpha_dot(self, t: ArrayLike) -> ArrayLike:
        _check_time(t)
        return -self.tau_alpha * np.power(
            np.asarray(t, dtype=float) + 1.0, -self.tau_alpha - 1.0
        )

    def beta_dot(self, t: ArrayLike) -> ArrayLike:
        _check_time(t)
        return -self.tau_beta * np.power(
            np.asarray(t, dtype=float) + 1.0, -self.tau_beta - 1.0
        )

    def evaluate(self, t: float) -> Tuple[float, float]:
        if t < 0:
            raise ScheduleError(f"schedule evaluated at negative time {t}")
        return float(self.alpha(t)), float(self.beta(t))

    def exponent(self, which: Clock) -> float:
        if which == Clock.ALPHA:
            return self.tau_alpha
        if which == Clock.BETA:
            return self.tau_beta
        raise ScheduleError(f"no weight exponent for clock {which!r}")


def power_antiderivative(exponent: float, tau: ArrayLike) -> ArrayLike:
    """∫_0^τ (r+1)^-exponent dr."""
    tau = np.asarray(tau, dtype=float)
    if math.isclose(exponent, 1.0):
        return np.log1p(tau)
    return (np.power(tau + 1.0, 1.0 - exponent) - 1.0) / (1.0 - exponent)


class TimeChange:
    """The pair S(τ) = ∫_0^τ w_r dr and its inverse T = S⁻¹.

    ``weight`` is the clock weight w. When ``antiderivative`` is omitted S is
    evaluated by adaptive quadrature. T is always found by bracketed root
    finding on the increasing map S.
    """

    def __init__(
        self,
        weight: Callable[[float], float],
        antiderivative: Optional[Callable[[float], float]] = None,
        ratio: Optional[Callable[[float], float]] = None,
        ratio_derivative: Optional[Callable[[float], float]] = None,
        name: str = "custom",
    ) -> None:
        self._weight = weight
        self._antiderivative = antiderivative
        self._ratio = ratio
        self._ratio_derivative = ratio_derivative
        self.name = name
        self._inverse_cache: cachetools.LRUCache = cachetools.LRUCache(maxsize=65536)
        # shared by probe shots, chart samples and basin trials across threads
        self._inverse_lock = threading.Lock()

    def weight(self, tau: float) -> float:
        return float(self._weight(tau))

    def forward(self, tau: float) -> float:
        if tau < 0:
            raise ScheduleError(f"time change evaluated at negative time {tau}")
        if self._antiderivative is not None:
            return float(self._antiderivative(tau))
        value, _ = integrate.quad(self._weight, 0.0, tau, epsabs=1e-13, epsrel=1e-12)
        return float(value)

    @cachetools.cachedmethod(
        operator.attrgetter("_inverse_cache"), lock=operator.attrgetter("_inverse_lock")
    )
    def inverse(self, t: float) -> float:
        if t < 0:
            raise ScheduleError(f"inverse time change evaluated at negative time {t}")
        if t == 0:
            return 0.0
        upper = max(1.0, t)
        while self.forward(upper) < t:
            upper *= 2.0
        return float(
            optimize.brentq(
                lambda tau: self.forward(tau) - t,
                0.0,
                upper,
                xtol=1e-13,
                rtol=4 * np.finfo(float).eps,
                maxiter=500,
            )
        )

    def rate(self, t: float) -> float:
        """dT/dt = 1 / w(T(t))."""
        return 1.0 / self.weight(self.inverse(t))

    def gamma(self, t: float) -> float:
        if self._ratio is None:
            raise ScheduleError(f"time change {self.name} carries no ratio process")
        return float(self._ratio(self.inverse(t)))

    def gamma_dot(self, t: float) -> float:
        if self._ratio_derivative is None:
            raise ScheduleError(f"time change {self.name} carries no ratio process")
        tau = self.inverse(t)
        return float(self._ratio_derivative(tau)) / self.weight(tau)


def time_change(s: Schedule, which: Union[Clock, str]) -> TimeChange:
    """Time change to the β-clock (γ = α/β → 0) or the α-clock (γ = β/α → ∞)."""
    which = Clock(which)
    exponent = s.exponent(which)
    # γ(τ) = (τ+1)^gap in the original time
    gap = s.tau_alpha - s.tau_beta
    if which == Clock.BETA:
        gap = -gap

    def ratio(tau: float) -> float:
        return float((tau + 1.0) ** gap)

    def ratio_derivative(tau: float) -> float:
        return float(gap * (tau + 1.0) ** (gap - 1.0))

    return TimeChange(
        weight=lambda tau: (tau + 1.0) ** -exponent,
        antiderivative=lambda tau: float(power_antiderivative(exponent, tau)),
        ratio=ratio,
        ratio_derivative=ratio_derivative,
        name=which.value,
    )


def fit_ratio_exponent(tc: TimeChange, t_grid: np.ndarray) -> float:
    """Largest τ_γ with γ(t) <= (t+1)^-τ_γ on the positive part of the grid."""
    t_grid = np.asarray(t_grid, dtype=float)
    t_grid = t_grid[t_grid > 0]
    if t_grid.size == 0:
        raise ScheduleError("fitting the ratio exponent needs positive grid times")
    exponents = [-math.log(tc.gamma(t)) / math.log1p(t) for t in t_grid]
    fitted = float(min(exponents))
    logger.debug("Fitted ratio exponent %.6f on %s points", fitted, t_grid.size)
    return fitted


class IPenaltyWeight(Protocol):
    def value(self, t: float) -> float:
        pass

    def derivative(self, t: float) -> float:
        pass


@dataclasses.dataclass(frozen=True, eq=False)
class ClockRatio:
    """The ratio process of a time change used as a penalty weight."""

    clock: TimeChange

    def value(self, t: float) -> float:
        return self.clock.gamma(t)

    def derivative(self, t: float) -> float:
        return self.clock.gamma_dot(t)


@dataclasses.dataclass(frozen=True)
class PowerWeight:
    """coefficient * (t+1)^exponent."""

    coefficient: float = 1.0
    exponent: float = 0.5

    def value(self, t: float) -> float:
        return self.coefficient * (t + 1.0) ** self.exponent

    def derivative(self, t: float) -> float:
        return self.coefficient * self.exponent * (t + 1.0) ** (self.exponent - 1.0)
