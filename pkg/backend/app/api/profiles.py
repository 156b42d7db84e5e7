from fastapi import APIRouter, Depends, HTTPException
from sqlalchemy.orm import Session
from typing import List

from ..database import get_db
from ..models import BenchRun
from ..schemas import ProfileCurveResponse
from ..services.bench import performance_profile
from ..services.errors import OptimizationError
from ..services.reporting import load_cost_matrix

router = APIRouter()

@router.get("/{run_id}/profile/{eps}", response_model=List[ProfileCurveResponse])
def get_profile(run_id: int, eps: float, db: Session = Depends(get_db)):
    """저장된 비용에서 성능 프로파일 곡선을 다시 계산합니다."""
    if not db.query(BenchRun).filter(BenchRun.id == run_id).first():
        raise HTTPException(status_code=404, detail="Bench run not found")
    matrix = load_cost_matrix(db, run_id, eps)
    if not matrix.problems:
        raise HTTPException(status_code=404, detail="Cost matrix not found")
    try:
        curves = performance_profile(matrix)
    except (OptimizationError, ValueError) as e:
        raise HTTPException(status_code=422, detail=str(e))
    return [
        ProfileCurveResponse(solver=c.solver, breakpoints=c.breakpoints.tolist(), values=c.values.tolist())
        for c in curves
    ]
