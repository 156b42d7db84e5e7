from fastapi import APIRouter, Depends, HTTPException
from sqlalchemy.orm import Session
from typing import List
import json
import math

from ..database import get_db
from ..models import BenchRun, RunRecord
from ..schemas import BenchRunResponse, CostMatrixResponse, RunRecordResponse
from ..services.reporting import load_cost_matrix

router = APIRouter()

def to_response(run):
    try:
        dropped = json.loads(run.dropped) if run.dropped else {}
    except json.JSONDecodeError:
        dropped = {}
    return BenchRunResponse(
        id=run.id,
        seed=run.seed,
        metric=run.metric,
        eps_list=json.loads(run.eps_list) if run.eps_list else [],
        solvers=list(json.loads(run.solver_configs)) if run.solver_configs else [],
        dropped=dropped,
        created_at=run.created_at,
    )

def get_run_or_404(run_id, db):
    run = db.query(BenchRun).filter(BenchRun.id == run_id).first()
    if not run:
        raise HTTPException(status_code=404, detail="Bench run not found")
    return run

@router.get("/", response_model=List[BenchRunResponse])
def list_runs(db: Session = Depends(get_db)):
    runs = db.query(BenchRun).order_by(BenchRun.id.desc()).all()
    return [to_response(run) for run in runs]

@router.get("/{run_id}", response_model=BenchRunResponse)
def get_run(run_id: int, db: Session = Depends(get_db)):
    return to_response(get_run_or_404(run_id, db))

@router.get("/{run_id}/records", response_model=List[RunRecordResponse])
def get_run_records(run_id: int, db: Session = Depends(get_db)):
    get_run_or_404(run_id, db)
    return db.query(RunRecord).filter(RunRecord.bench_id == run_id).order_by(RunRecord.id).all()

@router.get("/{run_id}/costs/{eps}", response_model=CostMatrixResponse)
def get_costs(run_id: int, eps: float, db: Session = Depends(get_db)):
    """저장된 비용 행렬을 돌려줍니다. 미해결 항목은 null 입니다."""
    get_run_or_404(run_id, db)
    matrix = load_cost_matrix(db, run_id, eps)
    if not matrix.problems:
        raise HTTPException(status_code=404, detail="Cost matrix not found")
    return CostMatrixResponse(
        eps=eps,
        solvers=matrix.solvers,
        problems=matrix.problems,
        costs=[[v if math.isfinite(v) else None for v in row] for row in matrix.t.tolist()],
    )
