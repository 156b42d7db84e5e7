from enum import Enum
from pydantic import BaseModel, Field, field_validator, model_validator
from typing import Any, Dict, List, Optional
from datetime import datetime

# Line Search Schemas
class LineSearchParams(BaseModel):
    alpha: float = 0.1
    beta: float = 0.75
    max_evals: int = 50
    lambda_min: float = 1e-14
    lambda_max: float = 1e10
    expansion: float = 2.0
    roundoff: float = 1e-10

    @model_validator(mode="after")
    def check_wolfe_constants(self):
        if not 0.0 < self.alpha < 0.5:
            raise ValueError("alpha must lie in (0, 1/2)")
        if not self.alpha < self.beta < 1.0:
            raise ValueError("beta must lie in (alpha, 1)")
        if self.max_evals < 1:
            raise ValueError("max_evals must be at least 1")
        if not 0.0 < self.lambda_min < 1.0 < self.lambda_max:
            raise ValueError("need 0 < lambda_min < 1 < lambda_max")
        if self.expansion <= 1.0:
            raise ValueError("expansion factor must exceed 1")
        if not 0.0 <= self.roundoff < 1e-6:
            raise ValueError("roundoff allowance must lie in [0, 1e-6)")
        return self

# Solver Schemas
class Method(str, Enum):
    BLOCK_BFGS = "BlockBFGS"
    ROLLING_BLOCK_BFGS = "RollingBlockBFGS"
    BFGS = "BFGS"
    DAMPED_BFGS = "DampedBFGS"
    CAUTIOUS_BFGS = "CautiousBFGS"
    MODIFIED_BFGS = "ModifiedBFGS"
    GRADIENT_DESCENT = "GradientDescent"

def integer_cube_root(n: int) -> int:
    q = int(round(n ** (1.0 / 3.0)))
    while q ** 3 > n:
        q -= 1
    while (q + 1) ** 3 <= n:
        q += 1
    return q

class SolverConfig(BaseModel):
    method: Method = Method.BLOCK_BFGS
    q: Optional[int] = None  # None이면 문제 차원에서 결정
    tau: float = 1e-3
    always_keep_first: bool = False
    use_filter: Optional[bool] = None  # None이면 방법별 기본값
    lead_with_shortened_step: bool = False
    ls: LineSearchParams = Field(default_factory=LineSearchParams)
    grad_tol: float = 1e-6
    f_stop: Optional[float] = None
    max_steps: int = 5000
    h0_scale: float = 1.0
    damping_phi: float = 0.2
    cautious_eps: float = 1e-6
    cautious_exponent: float = 1.0
    modify_eps: float = 1e-6
    keep_iterates: bool = False

    @field_validator("q")
    @classmethod
    def check_q(cls, v):
        if v is not None and v < 1:
            raise ValueError("q must be at least 1")
        return v

    @model_validator(mode="after")
    def check_ranges(self):
        if self.tau <= 0:
            raise ValueError("tau must be positive")
        if self.max_steps < 1:
            raise ValueError("max_steps must be at least 1")
        if self.h0_scale <= 0:
            raise ValueError("h0_scale must be positive")
        if not 0.0 < self.damping_phi < 1.0:
            raise ValueError("damping_phi must lie in (0, 1)")
        if self.grad_tol < 0:
            raise ValueError("grad_tol must be non-negative")
        return self

    def resolved_q(self, n: int) -> int:
        """q = ⌊n^(1/3)⌋, 롤링 방식은 min{3, ⌊n^(1/3)⌋}."""
        if self.q is not None:
            return self.q
        q = max(1, integer_cube_root(n))
        if self.method == Method.ROLLING_BLOCK_BFGS:
            return min(3, q)
        return q

    @property
    def filtering(self) -> bool:
        if self.use_filter is not None:
            return self.use_filter
        return self.method != Method.ROLLING_BLOCK_BFGS

    def with_updates(self, **changes) -> "SolverConfig":
        return self.model_validate({**self.model_dump(), **changes})

# Suite Schemas
class ProblemSpec(BaseModel):
    name: str
    kind: str  # quadratic | logistic | tanh | barrier | benchmark | libsvm_logistic | libsvm_tanh
    seed: int = 0
    n: int
    m: Optional[int] = None
    params: Dict[str, Any] = {}

class SuiteManifest(BaseModel):
    seed: int
    problems: List[ProblemSpec]

# API Response Schemas
class BenchRunResponse(BaseModel):
    id: int
    seed: int
    metric: str
    eps_list: List[float]
    solvers: List[str]
    dropped: Dict[str, List[str]]
    created_at: Optional[datetime] = None

class RunRecordResponse(BaseModel):
    id: int
    problem: str
    solver: str
    termination: str
    steps: int
    f_final: Optional[float]
    gnorm_final: Optional[float]
    wall_time: float

    class Config:
        from_attributes = True

class CostMatrixResponse(BaseModel):
    eps: float
    solvers: List[str]
    problems: List[str]
    costs: List[List[Optional[float]]]  # None = 미해결

class ProfileCurveResponse(BaseModel):
    solver: str
    breakpoints: List[float]
    values: List[float]

class BenchmarkFunctionResponse(BaseModel):
    name: str
    min_dim: int
    even_dim: bool
    formula: str
