from fastapi import APIRouter, Depends, HTTPException

from ..core.exceptions import RecordLabError
from ..core.tally_manager import TallyManager
from ..models.domain import RecordTally
from ..models.requests import TallyRequest

router = APIRouter(prefix="/api/v1", tags=["records"])


async def get_tally_manager() -> TallyManager:
    return TallyManager()


@router.post("/records/tally", response_model=RecordTally)
async def tally_records(
    request: TallyRequest,
    manager: TallyManager = Depends(get_tally_manager)
):
    """Pareto, chain and dominating records and maxima of one point sequence"""
    try:
        manager.keep_indices = request.keep_indices
        return manager.execute(request.points, request.statistics)
    except (RecordLabError, ValueError) as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        raise HTTPException(status_code=500, detail=str(e))


@router.get("/records/statistics")
async def list_statistics():
    return {"statistics": TallyManager().get_available_statistics()}
