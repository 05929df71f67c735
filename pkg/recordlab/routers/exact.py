from fastapi import APIRouter, HTTPException, Query

from ..core.exceptions import RecordLabError
from ..models.domain import KernelDist, Model, MomentTable, Statistic
from ..models.requests import ClosedFormValue
from ..services.exactlaws import (RECURRENCE_N_MAX, chain_kernel, chain_moments_exact, closed_form_d2,
                                  dom_moments_table)

router = APIRouter(prefix="/api/v1/exact", tags=["exact"])


@router.get("/kernel", response_model=KernelDist)
def get_kernel(
    model: str = Query("simplex"),
    d: int = Query(..., ge=1),
    n: int = Query(..., ge=1, le=2000),
    exact: bool = Query(False)
):
    """Distribution pi_{n,k} of the chain-record recurrence index"""
    try:
        return chain_kernel(Model.of(model, d), n, exact=exact)
    except (RecordLabError, ValueError) as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        raise HTTPException(status_code=500, detail=str(e))


@router.get("/moments", response_model=MomentTable)
def get_moments(
    model: str = Query("simplex"),
    d: int = Query(..., ge=1),
    stat: Statistic = Query(Statistic.CHAIN),
    n_max: int = Query(..., ge=1, le=RECURRENCE_N_MAX),
    exact: bool = Query(False)
):
    """Exact mean and variance for n = 1..n_max (chain or dominating records)"""
    try:
        m = Model.of(model, d)
        if stat == Statistic.CHAIN:
            return chain_moments_exact(m, n_max, exact=exact)
        if stat == Statistic.DOMINATING:
            return dom_moments_table(m, n_max)
        raise ValueError(f"No exact finite-n law for {stat.value}; use the asymptotic routes")
    except (RecordLabError, ValueError) as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        raise HTTPException(status_code=500, detail=str(e))


@router.get("/closed-form/{statistic}", response_model=ClosedFormValue)
def get_closed_form(statistic: str, n: int = Query(..., ge=1)):
    try:
        return ClosedFormValue(statistic=statistic, n=n, value=closed_form_d2(statistic, n))
    except (RecordLabError, ValueError) as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        raise HTTPException(status_code=500, detail=str(e))
