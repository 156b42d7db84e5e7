from fastapi import APIRouter, HTTPException
from typing import Dict, List

from ..schemas import BenchmarkFunctionResponse, SolverConfig, SuiteManifest
from ..services.problems import BENCHMARKS, synth_manifest
from ..services.solvers import convex_presets, nonconvex_presets

router = APIRouter()

@router.get("/benchmarks", response_model=List[BenchmarkFunctionResponse])
def list_benchmarks():
    return [
        BenchmarkFunctionResponse(name=name, min_dim=cls.min_dim, even_dim=cls.even_dim, formula=cls.formula)
        for name, cls in BENCHMARKS.items()
    ]

@router.get("/suite/{seed}", response_model=SuiteManifest)
def get_synthetic_manifest(seed: int, benchmarks: bool = False):
    """시드로 만든 합성 문제 모음의 매니페스트 (문제 데이터는 만들지 않음)."""
    if seed < 0:
        raise HTTPException(status_code=422, detail="Seed must be non-negative")
    return synth_manifest(seed, benchmarks=benchmarks)

@router.get("/presets/{family}", response_model=Dict[str, SolverConfig])
def get_presets(family: str):
    if family == "convex":
        return convex_presets()
    if family == "nonconvex":
        return nonconvex_presets()
    raise HTTPException(status_code=404, detail="Preset family not found")
