from typing import List, Optional

from pydantic import BaseModel, Field, model_validator

from .domain import Statistic


class TallyRequest(BaseModel):
    points: List[List[float]] = Field(default_factory=list)
    statistics: List[Statistic] = Field(default_factory=lambda: list(Statistic))
    keep_indices: bool = True

    @model_validator(mode="after")
    def _same_dimension(self) -> "TallyRequest":
        dims = {len(p) for p in self.points}
        if len(dims) > 1:
            raise ValueError(f"points have mixed dimensions {sorted(dims)}")
        if 0 in dims:
            raise ValueError("points must have at least one coordinate")
        return self


class AsymptoticValue(BaseModel):
    kind: str
    model: str
    d: int
    n: float
    value: float


class LimitCurveResponse(BaseModel):
    resolution: int
    points: List[List[float]]


class ClosedFormValue(BaseModel):
    statistic: str
    n: int
    value: float


class ServiceInfo(BaseModel):
    message: str
    version: str
    docs: Optional[str] = "/docs"
