from typing import Any, Optional, Sequence


class RecordLabError(ValueError):
    """Base class for domain errors; routers map it to HTTP 400"""


class DimensionMismatchError(RecordLabError):
    pass


class PoleError(RecordLabError):
    pass


class ExactModeError(RecordLabError):
    pass


class ZeroVarianceError(RecordLabError):
    pass


class DivergentLimitError(RecordLabError):
    pass


class QuadratureError(RecordLabError):
    def __init__(self, message: str, value: Optional[float] = None, err: Optional[float] = None):
        super().__init__(message)
        self.value = value
        self.err = err


class SeriesConvergenceError(RecordLabError):
    """Requested tolerance not reached; `achieved` holds the best SeriesValue obtained"""

    def __init__(self, message: str, achieved: Any = None):
        super().__init__(message)
        self.achieved = achieved


class RootPolishError(RecordLabError):
    def __init__(self, message: str, residuals: Sequence[float] = ()):
        super().__init__(message)
        self.residuals = list(residuals)


class NewtonDivergenceError(RecordLabError):
    pass
