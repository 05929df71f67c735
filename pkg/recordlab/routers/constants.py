from typing import Optional

from fastapi import APIRouter, HTTPException, Query

from ..core.exceptions import RecordLabError
from ..models.domain import ConstantReport, SeriesValue
from ..services.varconstants import D_MAX, constant, oracle_integral, with_oracle

router = APIRouter(prefix="/api/v1/constants", tags=["constants"])


@router.get("/oracle/{name}", response_model=SeriesValue)
def get_oracle(name: str, d: int = Query(..., ge=2, le=D_MAX)):
    """Quadrature of the integral form of I0, Idd, J0 or K"""
    try:
        return oracle_integral(name, d)
    except (RecordLabError, ValueError) as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        raise HTTPException(status_code=500, detail=str(e))


@router.get("/{name}", response_model=ConstantReport)
def get_constant(
    name: str,
    d: int = Query(..., ge=2, le=D_MAX),
    eps: Optional[float] = Query(None, gt=0, lt=1),
    precision: Optional[str] = Query(None),
    oracle: bool = Query(False)
):
    """v, vtilde or K with its components and certified error bound"""
    try:
        report = constant(name, d, eps, precision)
        return with_oracle(report) if oracle else report
    except (RecordLabError, ValueError) as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        raise HTTPException(status_code=500, detail=str(e))
