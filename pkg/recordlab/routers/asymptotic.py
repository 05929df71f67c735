from typing import List, Optional

from fastapi import APIRouter, HTTPException, Query

from ..core.charpoly import char_zeros, limit_curve
from ..core.exceptions import RecordLabError
from ..models.domain import Model, Spectrum
from ..models.requests import AsymptoticValue, LimitCurveResponse
from ..services.asymptotics import (chain_mean_asym, chain_params, chain_variance_asym, dom_limits,
                                    maxima_mean_asym, pareto_mean_asym, record_variance_asym, summary_rows)

router = APIRouter(prefix="/api/v1", tags=["asymptotic"])

MOMENT_KINDS = ("pareto-mean", "maxima-mean")
VALUE_KINDS = ("pareto-var", "maxima-var", "chain-mean", "chain-var")


@router.get("/asymptotic/summary")
def get_summary(d: int = Query(..., ge=1, le=12)):
    """Mean and variance laws per record type and model"""
    try:
        return {"d": d, "rows": summary_rows(d)}
    except (RecordLabError, ValueError) as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        raise HTTPException(status_code=500, detail=str(e))


@router.get("/asymptotic/{kind}")
def get_asymptotic(
    kind: str,
    model: str = Query("simplex"),
    d: int = Query(..., ge=1),
    n: Optional[float] = Query(None, gt=1),
    precision: Optional[str] = Query(None)
):
    """pareto-mean, maxima-mean, pareto-var, maxima-var, chain-mean, chain-var, chain-params, dom-limits"""
    try:
        m = Model.of(model, d)
        if kind == "chain-params":
            return chain_params(m)
        if kind == "dom-limits":
            return dom_limits(m)
        if n is None:
            raise ValueError(f"'{kind}' needs n")
        if kind in MOMENT_KINDS:
            return pareto_mean_asym(d, n) if kind == "pareto-mean" else maxima_mean_asym(d, n)
        if kind == "pareto-var" or kind == "maxima-var":
            value = record_variance_asym(kind.split("-")[0], d, n, precision=precision)
        elif kind == "chain-mean":
            value = chain_mean_asym(m, n)
        elif kind == "chain-var":
            value = chain_variance_asym(m, n)
        else:
            raise ValueError(f"Unknown kind '{kind}'")
        return AsymptoticValue(kind=kind, model=m.kind.value, d=d, n=n, value=value)
    except (RecordLabError, ValueError) as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        raise HTTPException(status_code=500, detail=str(e))


@router.get("/zeros/limit-curve", response_model=LimitCurveResponse)
def get_limit_curve(resolution: int = Query(256, ge=2, le=8192)):
    try:
        points: List[List[float]] = [[w.real, w.imag] for w in limit_curve(resolution)]
        return LimitCurveResponse(resolution=resolution, points=points)
    except (RecordLabError, ValueError) as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        raise HTTPException(status_code=500, detail=str(e))


@router.get("/zeros", response_model=Spectrum)
def get_zeros(d: int = Query(..., ge=2, le=200), y: float = Query(1.0, gt=0)):
    """Zeros of (z+1)...(z+d) - d! y; the zero at the origin is dropped at y = 1"""
    try:
        return char_zeros(d, y)
    except (RecordLabError, ValueError) as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        raise HTTPException(status_code=500, detail=str(e))
