"""
실험 그리드와 Dolan-Moré 성능 프로파일.

run_grid는 (문제 × 솔버) 실행을 돌리고, ε마다 "f_p + ε|f_p| 이하에 처음 도달한
비용" 행렬을 만듭니다. 어떤 솔버도 풀지 못한 문제는 행렬에서 빠지고 보고됩니다.
"""

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional

import numpy as np

from ..schemas import Method, SolverConfig
from .errors import EmptyInput, OptimizationError, ReferenceFailed
from .oracle import derivative_report
from .solvers import RunTrace, Termination, solve

logger = logging.getLogger(__name__)

OPTIMAL_BAND = 1e-10
REFERENCE_GRAD_TOL = 1e-9
REFERENCE_MAX_STEPS = 50000
CPU_RESOLUTION = 1e-6

GRADIENT_GATE = 1e-5
HESS_ACTION_GATE = 1e-4


class Metric(str, Enum):
    STEPS = "steps"
    CPU = "cpu"


@dataclass
class CostMatrix:
    """t[p, s]: 문제 p를 솔버 s가 푸는 비용. inf = 미해결."""

    solvers: List[str]
    problems: List[str]
    t: np.ndarray

    def __post_init__(self):
        self.t = np.asarray(self.t, dtype=float).reshape(len(self.problems), len(self.solvers))

    def best(self):
        return self.t.min(axis=1)

    def drop_unsolved(self):
        """모든 솔버가 못 푼 문제를 뺀 행렬과 뺀 문제 이름."""
        solved = np.isfinite(self.best())
        dropped = [p for p, ok in zip(self.problems, solved) if not ok]
        kept = CostMatrix(self.solvers, [p for p, ok in zip(self.problems, solved) if ok], self.t[solved])
        return kept, dropped

    def without(self, names):
        names = set(names)
        keep = [i for i, p in enumerate(self.problems) if p not in names]
        return CostMatrix(self.solvers, [self.problems[i] for i in keep], self.t[keep])

    def column(self, solver):
        return self.t[:, self.solvers.index(solver)]


@dataclass
class ProfileCurve:
    """ρ_s(r): 계단 함수. breakpoints[j] ≤ r < breakpoints[j+1] 구간에서 values[j]."""

    solver: str
    breakpoints: np.ndarray
    values: np.ndarray

    def __call__(self, r):
        j = int(np.searchsorted(self.breakpoints, r, side="right")) - 1
        return float(self.values[j]) if j >= 0 else 0.0

    @property
    def solved_fraction(self):
        return float(self.values[-1]) if len(self.values) else 0.0


def performance_ratios(costs):
    best = costs.best()
    if not np.all(np.isfinite(best)):
        raise ValueError("every problem needs at least one finite cost; call drop_unsolved() first")
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = costs.t / best[:, None]
    ratios[costs.t == best[:, None]] = 1.0
    ratios[~np.isfinite(costs.t)] = math.inf
    return ratios


def performance_profile(costs):
    if not costs.problems or not costs.solvers:
        raise EmptyInput("performance profile needs at least one problem and one solver")
    ratios = performance_ratios(costs)
    n_problems = len(costs.problems)
    curves = []
    for j, solver in enumerate(costs.solvers):
        finite = np.sort(ratios[np.isfinite(ratios[:, j]), j])
        if finite.size == 0:
            curves.append(ProfileCurve(solver, np.array([1.0]), np.array([0.0])))
            continue
        breakpoints = np.unique(finite)
        values = np.searchsorted(finite, breakpoints, side="right") / n_problems
        curves.append(ProfileCurve(solver, breakpoints, values))
    return curves


def fstop_threshold(f_star, eps=0.01):
    """f_* + ε|f_*|, |f_*| < 1e-10 이면 f_* + 1e-10."""
    if abs(f_star) < OPTIMAL_BAND:
        return f_star + OPTIMAL_BAND
    return f_star + eps * abs(f_star)


def reference_config():
    return SolverConfig(method=Method.BFGS, grad_tol=REFERENCE_GRAD_TOL, max_steps=REFERENCE_MAX_STEPS)


def reference_value(oracle, x0, cfg=None):
    """고정밀 BFGS 실행으로 f_*를 구합니다. 진전이 없으면 ReferenceFailed."""
    cfg = cfg or reference_config()
    try:
        trace = solve(oracle, x0, cfg)
    except OptimizationError as exc:
        raise ReferenceFailed(f"{oracle.name}: reference run failed ({exc})") from exc
    converged = trace.termination == Termination.GRAD_TOL
    if not np.isfinite(trace.f_final) or (not converged and not trace.f_final < trace.f0):
        raise ReferenceFailed(f"{oracle.name}: reference run made no progress ({trace.termination.value})")
    if not converged:
        logger.warning("%s: reference run stopped with %s, using f=%.10e", oracle.name,
                       trace.termination.value, trace.f_final)
    return trace.f_final


def compute_fstop(oracle, x0, cfg=None):
    return fstop_threshold(reference_value(oracle, x0, cfg))


def first_crossing(trace, threshold, metric=Metric.STEPS):
    """trace가 처음으로 threshold 이하가 되는 비용. 도달하지 못하면 inf."""
    hits = np.flatnonzero(trace.f_values <= threshold)
    if hits.size == 0:
        return math.inf
    j = int(hits[0])
    if metric == Metric.STEPS:
        return float(max(j, 1))
    elapsed = trace.records[j - 1].elapsed if j > 0 else 0.0
    return max(elapsed, CPU_RESOLUTION)


@dataclass
class GridResult:
    metric: Metric
    eps_list: List[float]
    solvers: Dict[str, SolverConfig]
    problems: List[str]
    traces: Dict[tuple, Optional[RunTrace]]
    f_best: Dict[str, float]
    costs: Dict[float, CostMatrix]
    dropped: Dict[str, List[str]] = field(default_factory=dict)
    failures: Dict[tuple, str] = field(default_factory=dict)


def _run_one(problem, solver_name, cfg):
    try:
        trace = solve(problem.oracle, problem.x0, cfg)
    except Exception as exc:
        logger.warning("%s / %s failed: %s", problem.name, solver_name, exc)
        return None, str(exc)
    trace.problem = problem.name
    logger.info("%s / %s: %s in %d steps", problem.name, solver_name, trace.termination.value, trace.steps)
    return trace, None


def _best_values(suite, traces, solver_names, reference):
    f_best = {}
    for problem in suite:
        if reference:
            try:
                f_best[problem.name] = reference_value(problem.oracle, problem.x0)
                continue
            except ReferenceFailed as exc:
                logger.warning("%s: %s; falling back to the best value in the grid", problem.name, exc)
        values = [float(np.min(traces[problem.name, s].f_values)) for s in solver_names
                  if traces[problem.name, s] is not None]
        values = [v for v in values if np.isfinite(v)]
        f_best[problem.name] = min(values) if values else math.inf
    return f_best


def run_grid(suite, solver_cfgs, eps_list, metric=Metric.STEPS, parallelism=1, reference=False,
             drop_line_search_failures=False):
    """
    suite: SuiteProblem 목록, solver_cfgs: 이름 → SolverConfig.

    CPU 시간 지표는 워커 하나로 실행하고 첫 실행을 워밍업으로 버립니다.
    """
    metric = Metric(metric)
    solver_names = list(solver_cfgs)
    if not suite or not solver_names:
        raise EmptyInput("run_grid needs at least one problem and one solver")
    jobs = [(problem, name) for problem in suite for name in solver_names]

    if metric == Metric.CPU:
        if parallelism != 1:
            logger.info("cpu metric: forcing parallelism=1")
        parallelism = 1
        _run_one(suite[0], solver_names[0], solver_cfgs[solver_names[0]])

    start = time.perf_counter()
    with ThreadPoolExecutor(max_workers=max(1, parallelism)) as pool:
        outcomes = list(pool.map(lambda job: _run_one(job[0], job[1], solver_cfgs[job[1]]), jobs))
    traces, failures = {}, {}
    for (problem, name), (trace, error) in zip(jobs, outcomes):
        traces[problem.name, name] = trace
        if error is not None:
            failures[problem.name, name] = error
    logger.info("grid of %d runs finished in %.2fs", len(jobs), time.perf_counter() - start)

    f_best = _best_values(suite, traces, solver_names, reference)
    problem_names = [p.name for p in suite]

    dropped = {}
    line_search = sorted({p for (p, _), t in traces.items()
                          if t is not None and t.termination == Termination.LINE_SEARCH_FAIL})
    if drop_line_search_failures and line_search:
        dropped["line_search"] = line_search

    costs = {}
    for eps in eps_list:
        table = np.full((len(problem_names), len(solver_names)), math.inf)
        for i, p in enumerate(problem_names):
            if not np.isfinite(f_best[p]):
                continue
            threshold = fstop_threshold(f_best[p], eps)
            for j, s in enumerate(solver_names):
                if traces[p, s] is not None:
                    table[i, j] = first_crossing(traces[p, s], threshold, metric)
        matrix = CostMatrix(solver_names, problem_names, table).without(dropped.get("line_search", []))
        matrix, unsolved = matrix.drop_unsolved()
        if unsolved:
            logger.warning("eps=%g: dropped %d problems unsolved by every solver: %s", eps, len(unsolved), unsolved)
            dropped[f"{eps:g}"] = unsolved
        costs[eps] = matrix

    return GridResult(
        metric=metric,
        eps_list=list(eps_list),
        solvers=dict(solver_cfgs),
        problems=problem_names,
        traces=traces,
        f_best=f_best,
        costs=costs,
        dropped=dropped,
        failures=failures,
    )


@dataclass
class CheckResult:
    name: str
    report: Dict[str, float]
    error: Optional[str] = None

    @property
    def passed(self):
        return (self.error is None
                and self.report["gradient"] <= GRADIENT_GATE
                and self.report["hess_action"] <= HESS_ACTION_GATE)


def check_suite(suite, rng):
    """모든 문제의 시작점에서 도함수 검사를 실행합니다."""
    results = []
    for problem in suite:
        try:
            report = derivative_report(problem.oracle, problem.x0, rng)
            results.append(CheckResult(problem.name, report))
        except OptimizationError as exc:
            results.append(CheckResult(problem.name, {}, error=str(exc)))
        if not results[-1].passed:
            logger.warning("derivative check failed for %s: %s", problem.name, results[-1].error or results[-1].report)
    return results
