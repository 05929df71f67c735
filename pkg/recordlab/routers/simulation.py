from fastapi import APIRouter, HTTPException

from ..core.exceptions import RecordLabError
from ..models.domain import ExperimentConfig, ExperimentReport
from ..services.montecarlo import run_experiment

router = APIRouter(prefix="/api/v1", tags=["simulation"])


@router.post("/simulate", response_model=ExperimentReport)
def simulate(cfg: ExperimentConfig):
    """Run a seeded Monte Carlo experiment; identical configs give identical reports"""
    try:
        return run_experiment(cfg)
    except (RecordLabError, ValueError) as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        raise HTTPException(status_code=500, detail=str(e))
