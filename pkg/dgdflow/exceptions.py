from typing import Optional

__all__ = (
    "DgdError",
    "GraphError",
    "ObjectiveError",
    "UnknownPreset",
    "NotACriticalPoint",
    "ScheduleError",
    "ValidityBoxError",
    "IntegratorError",
    "AnalysisError",
    "ConsensusBoundError",
    "ManifoldError",
    "NewtonDivergence",
    "EigenvalueSignChange",
    "AlignmentError",
    "ContractionConstantsError",
    "ContractionFailed",
    "ForcingTailError",
    "NoBoundaryFound",
    "ScenarioError",
)


class DgdError(Exception):
    pass


class GraphError(DgdError):
    pass


class ObjectiveError(DgdError):
    pass


class UnknownPreset(ObjectiveError):
    pass


class NotACriticalPoint(ObjectiveError):
    pass


class ScheduleError(DgdError):
    pass


class ValidityBoxError(DgdError):
    def __init__(self, t: float, norm: float, radius: float) -> None:
        super().__init__(
            f"state left the validity box at t={t:.6g} "
            f"(max |x_i| = {norm:.6g} > {radius:.6g})"
        )
        self.t = t
        self.norm = norm
        self.radius = radius


class IntegratorError(DgdError):
    pass


class AnalysisError(DgdError):
    pass


class ConsensusBoundError(AnalysisError):
    pass


class ManifoldError(DgdError):
    pass


class NewtonDivergence(ManifoldError):
    def __init__(self, message: str, beta: Optional[float] = None) -> None:
        super().__init__(message)
        self.beta = beta


class EigenvalueSignChange(ManifoldError):
    pass


class AlignmentError(ManifoldError):
    pass


class ContractionConstantsError(ManifoldError):
    pass


class ContractionFailed(ManifoldError):
    pass


class ForcingTailError(ManifoldError):
    pass


class NoBoundaryFound(ManifoldError):
    pass


class ScenarioError(DgdError):
    def __init__(self, field: str, message: str) -> None:
        super().__init__(f"{field}: {message}")
        self.field = field
        self.message = message
