import dataclasses
import enum

from ..exceptions import IntegratorError


class IntegratorMethod(str, enum.Enum):
    RK4_FIXED = "rk4_fixed"
    RK45_ADAPTIVE = "rk45_adaptive"

    @classmethod
    def _missing_(cls, value: object) -> "IntegratorMethod":
        aliases = {"rk4": cls.RK4_FIXED, "rk45": cls.RK45_ADAPTIVE}
        if isinstance(value, str) and value in aliases:
            return aliases[value]
        raise IntegratorError(
            f"unknown integrator method {value!r}, expected rk45 or rk4"
        )


@dataclasses.dataclass()
class IntegratorOptions:
    method: IntegratorMethod = IntegratorMethod.RK45_ADAPTIVE
    abs_tol: float = 1e-8
    rel_tol: float = 1e-8
    h_init: float = 1e-2
    h_min: float = 1e-12
    h_max: float = 100.0
    max_steps: int = 1_000_000
    stride: int = 1
    dense_output: bool = False

    def __post_init__(self) -> None:
        self.method = IntegratorMethod(self.method)
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise IntegratorError("integrator tolerances must be positive")
        if not 0 < self.h_min <= self.h_init <= self.h_max:
            raise IntegratorError(
                f"need 0 < h_min <= h_init <= h_max, got "
                f"{self.h_min}, {self.h_init}, {self.h_max}"
            )
        if self.max_steps < 1 or self.stride < 1:
            raise IntegratorError("max_steps and stride must be positive")
