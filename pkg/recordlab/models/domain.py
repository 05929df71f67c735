import math
from enum import Enum
from typing import Any, Dict, List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, field_validator, model_validator


class ModelKind(str, Enum):
    HYPERCUBE = "cube"
    SIMPLEX = "simplex"

    @classmethod
    def parse(cls, value: "str | ModelKind") -> "ModelKind":
        if isinstance(value, ModelKind):
            return value
        key = str(value).strip().lower()
        if key in ("cube", "hypercube"):
            return cls.HYPERCUBE
        if key == "simplex":
            return cls.SIMPLEX
        raise ValueError(f"Unknown model '{value}', expected cube or simplex")


class Statistic(str, Enum):
    PARETO = "pareto"
    CHAIN = "chain"
    DOMINATING = "dominating"
    MAXIMA = "maxima"


class Model(BaseModel):
    """Sampling region: the hypercube [0,1]^d or the simplex {x >= 0, sum x <= 1}"""
    model_config = ConfigDict(frozen=True)

    kind: ModelKind
    d: int = Field(..., ge=1)

    @field_validator("kind", mode="before")
    @classmethod
    def _parse_kind(cls, v):
        return ModelKind.parse(v)

    @classmethod
    def of(cls, kind: "str | ModelKind", d: int) -> "Model":
        return cls(kind=ModelKind.parse(kind), d=d)


class Point(BaseModel):
    model_config = ConfigDict(frozen=True)

    coords: List[float] = Field(..., min_length=1)

    @field_validator("coords")
    @classmethod
    def _finite(cls, v: List[float]) -> List[float]:
        if not all(math.isfinite(x) for x in v):
            raise ValueError("Point coordinates must be finite")
        return v

    @property
    def d(self) -> int:
        return len(self.coords)

    @property
    def norm(self) -> float:
        return math.fsum(self.coords)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.coords, dtype=float)


class RngStream(BaseModel):
    """(seed, stream) pair; each stream maps to an independent counter-based Philox generator"""
    model_config = ConfigDict(frozen=True)

    seed: int = Field(..., ge=0, lt=2**64)
    stream: int = Field(default=0, ge=0)

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream,))
        return np.random.Generator(np.random.Philox(ss))


class RecordTally(BaseModel):
    n: int = Field(..., ge=0)
    pareto_count: int = Field(default=0, ge=0)
    chain_count: int = Field(default=0, ge=0)
    dominating_count: int = Field(default=0, ge=0)
    maxima_count: int = Field(default=0, ge=0)
    pareto_indices: Optional[List[int]] = None
    chain_indices: Optional[List[int]] = None
    dominating_indices: Optional[List[int]] = None
    maxima_indices: Optional[List[int]] = None

    def count(self, statistic: "Statistic | str") -> int:
        return getattr(self, f"{Statistic(statistic).value}_count")


class SeriesValue(BaseModel):
    value: float
    err: float = Field(..., ge=0)
    terms_used: int = Field(default=0, ge=0)
    _native: Any = PrivateAttr(default=None)

    @field_validator("err")
    @classmethod
    def _finite_err(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError("SeriesValue.err must be finite")
        return v

    def with_native(self, native: Any) -> "SeriesValue":
        self._native = native
        return self

    def native(self) -> Any:
        """Full-precision value (mpf in dd mode), falling back to the float value"""
        return self.value if self._native is None else self._native

    def __add__(self, other: "SeriesValue") -> "SeriesValue":
        return SeriesValue(value=self.value + other.value, err=self.err + other.err,
                           terms_used=self.terms_used + other.terms_used)

    def scaled(self, factor: float) -> "SeriesValue":
        return SeriesValue(value=self.value * factor, err=self.err * abs(factor), terms_used=self.terms_used)


class KernelDist(BaseModel):
    model: ModelKind
    d: int = Field(..., ge=1)
    n: int = Field(..., ge=1)
    probs: List[float]
    exact: Optional[List[str]] = None

    @model_validator(mode="after")
    def _length(self) -> "KernelDist":
        if len(self.probs) != self.n:
            raise ValueError("KernelDist needs n probabilities pi_{n,0..n-1}")
        return self


class MomentRow(BaseModel):
    n: int = Field(..., ge=0)
    mean: float
    var: float
    mean_exact: Optional[str] = None
    var_exact: Optional[str] = None


class MomentTable(BaseModel):
    model: ModelKind
    d: int = Field(..., ge=1)
    statistic: Statistic
    rows: List[MomentRow] = Field(default_factory=list)

    def row(self, n: int) -> MomentRow:
        for r in self.rows:
            if r.n == n:
                return r
        raise KeyError(n)


class Spectrum(BaseModel):
    d: int = Field(..., ge=2)
    y: float
    re: List[float]
    im: List[float]
    residuals: List[float] = Field(default_factory=list)

    @property
    def lambdas(self) -> List[complex]:
        return [complex(a, b) for a, b in zip(self.re, self.im)]


class ChainParams(BaseModel):
    model: ModelKind
    d: int = Field(..., ge=2)
    mu: float = Field(..., gt=0)
    sigma2: float = Field(..., gt=0)
    c1: float
    c2: float
    c1_imag: float = 0.0
    c2_imag: float = 0.0
    c2_series: Optional[SeriesValue] = None


class AsymptoticTerm(BaseModel):
    """coefficient * n^exponent, times log n when `log` is set"""
    coefficient: float
    exponent: float
    log: bool = False


class AsymptoticMoment(BaseModel):
    kind: str
    d: int = Field(..., ge=1)
    n: float
    value: float
    terms: List[AsymptoticTerm] = Field(default_factory=list)
    error_class: str = "o(1)"

    @model_validator(mode="after")
    def _decreasing(self) -> "AsymptoticMoment":
        keys = [(t.exponent, t.log) for t in self.terms]
        if any(b >= a for a, b in zip(keys, keys[1:])):
            raise ValueError("Asymptotic term exponents must be strictly decreasing")
        return self


class ConstantReport(BaseModel):
    d: int = Field(..., ge=2)
    name: str
    value: SeriesValue
    components: Dict[str, SeriesValue] = Field(default_factory=dict)
    oracle: Optional[SeriesValue] = None
    precision: str = "double"


class ExperimentConfig(BaseModel):
    model: ModelKind
    d: int = Field(..., ge=1)
    ns: List[int] = Field(..., min_length=1)
    replications: int = Field(..., ge=2)
    statistics: List[Statistic] = Field(default_factory=lambda: list(Statistic))
    seed: int = Field(default=0x5EED, ge=0, lt=2**64)
    threads: Optional[int] = Field(default=None, ge=1)
    keep_tallies: bool = False

    @field_validator("model", mode="before")
    @classmethod
    def _parse_model(cls, v):
        return ModelKind.parse(v)

    @field_validator("ns")
    @classmethod
    def _positive(cls, v: List[int]) -> List[int]:
        if any(n < 1 for n in v):
            raise ValueError("every n must be >= 1")
        return sorted(set(v))


class ReportRow(BaseModel):
    statistic: Statistic
    n: int
    mean: float
    var: float
    se_mean: float = Field(..., ge=0)
    se_var: float = Field(..., ge=0)
    ref_mean: Optional[float] = None
    ref_var: Optional[float] = None
    ref_source: str = "none"
    z_mean: Optional[float] = None
    z_var: Optional[float] = None
    ks: Optional[float] = None
    ks_standardization: Optional[Literal["reference", "sample"]] = None


class ExperimentReport(BaseModel):
    config: ExperimentConfig
    rows: List[ReportRow] = Field(default_factory=list)
    wall_clock_s: float = 0.0
    partial: bool = False
    tallies: Optional[Dict[str, List[List[int]]]] = None

    def row(self, statistic: "Statistic | str", n: int) -> ReportRow:
        stat = Statistic(statistic)
        for r in self.rows:
            if r.statistic == stat and r.n == n:
                return r
        raise KeyError((stat, n))


class DomLimits(BaseModel):
    """n -> infinity limits of the dominating-record mean and variance"""
    model: ModelKind
    d: int = Field(..., ge=1)
    mean: float
    var: float
    mean_scale: float
    var_scale: float


class MeanRelationReport(BaseModel):
    model: ModelKind
    d: int = Field(..., ge=1)
    n: int = Field(..., ge=1)
    replications: int = Field(..., ge=2)
    pareto_mean: float
    maxima_sum_mean: float
    difference: float
    se: float = Field(..., ge=0)


class KernelCheckReport(BaseModel):
    model: ModelKind
    d: int = Field(..., ge=1)
    n: int = Field(..., ge=1)
    trials: int = Field(..., ge=1)
    observed: List[int]
    expected: List[float]
    chi2: float
    p_value: float


class CheckResult(BaseModel):
    name: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0


class ValidationReport(BaseModel):
    checks: List[CheckResult] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)
