"""
반복 드라이버: Block BFGS, Rolling Block BFGS, BFGS와 비볼록 변형들, 경사 하강법.

모든 솔버는 같은 Armijo-Wolfe 선탐색을 쓰고 RunTrace를 돌려줍니다.
선탐색 실패나 유한하지 않은 값은 예외로 빠져나가지 않고 trace의 종료 사유로 기록됩니다.
"""

import logging
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional

import numpy as np

from ..schemas import Method, SolverConfig
from .errors import DimensionMismatch, NonFiniteValue, NotDescent, SingularBlock
from .linesearch import wolfe_search
from .oracle import CountingOracle, EvalCounters
from .updates import (
    FilterResult,
    InverseApprox,
    StepBlock,
    block_update_inverse,
    cautious_gate,
    filter_steps,
    li_fukushima_modify,
    powell_damp,
    secant_update,
)

logger = logging.getLogger(__name__)

# BFGS 갱신을 건너뛰는 곡률 안전장치: ⟨y,s⟩ ≤ 1e-12‖y‖‖s‖
CURVATURE_SAFEGUARD = 1e-12

CSV_FIELDS = ("step", "k", "i", "f", "gnorm", "lambda", "snorm", "costheta", "updated", "qk")


class Termination(str, Enum):
    GRAD_TOL = "GradTol"
    F_STOP = "FStop"
    MAX_STEPS = "MaxSteps"
    LINE_SEARCH_FAIL = "LineSearchFail"
    NON_FINITE = "NonFinite"


@dataclass
class StepRecord:
    step: int
    k: int
    i: int
    f: float
    gnorm: float
    lam: float
    snorm: float
    costheta: float
    updated: bool = False
    qk: int = 0
    elapsed: float = 0.0

    def as_row(self):
        return (self.step, self.k, self.i, self.f, self.gnorm, self.lam, self.snorm,
                self.costheta, int(self.updated), self.qk)


@dataclass
class RunTrace:
    method: str
    problem: str
    dim: int
    f0: float
    gnorm0: float
    records: List[StepRecord] = field(default_factory=list)
    counters: EvalCounters = field(default_factory=EvalCounters)
    wall_time: float = 0.0
    termination: Optional[Termination] = None
    x_final: Optional[np.ndarray] = None
    iterates: List[np.ndarray] = field(default_factory=list)

    @property
    def steps(self):
        return len(self.records)

    @property
    def f_values(self):
        return np.array([self.f0] + [r.f for r in self.records])

    @property
    def f_final(self):
        return self.records[-1].f if self.records else self.f0

    @property
    def gnorm_final(self):
        return self.records[-1].gnorm if self.records else self.gnorm0

    @property
    def update_count(self):
        return sum(1 for r in self.records if r.updated)

    def summary(self):
        return {
            "method": self.method,
            "problem": self.problem,
            "dim": self.dim,
            "termination": self.termination.value if self.termination else None,
            "steps": self.steps,
            "f0": self.f0,
            "f_final": self.f_final,
            "gnorm_final": self.gnorm_final,
            "updates": self.update_count,
            "counters": self.counters.as_dict(),
            "wall_time": self.wall_time,
        }


class _RunState:
    """한 번의 실행 상태: 현재 점, 함수값, 그래디언트, trace."""

    def __init__(self, oracle, x0, cfg):
        self.oracle = CountingOracle(oracle)
        self.cfg = cfg
        self.x = np.array(x0, dtype=float)
        if self.x.shape != (oracle.dim,):
            raise DimensionMismatch(f"x0 has shape {self.x.shape}, expected ({oracle.dim},)")
        self.start = time.perf_counter()
        self.f, self.g = self.oracle.value_and_gradient(self.x)
        if not np.isfinite(self.f) or not np.all(np.isfinite(self.g)):
            raise NonFiniteValue(f"{oracle.name}: objective is not finite at the starting point")
        self.trace = RunTrace(
            method=cfg.method.value,
            problem=oracle.name,
            dim=oracle.dim,
            f0=float(self.f),
            gnorm0=float(np.linalg.norm(self.g)),
        )
        if cfg.keep_iterates:
            self.trace.iterates.append(self.x.copy())

    def stop_reason(self):
        if np.linalg.norm(self.g) <= self.cfg.grad_tol:
            return Termination.GRAD_TOL
        if self.cfg.f_stop is not None and self.f <= self.cfg.f_stop:
            return Termination.F_STOP
        if self.trace.steps >= self.cfg.max_steps:
            return Termination.MAX_STEPS
        return None

    def step(self, d, k, i):
        """선탐색 후 한 스텝 이동. 실패하면 None."""
        try:
            res = wolfe_search(self.oracle, self.x, d, self.f, self.g, self.cfg.ls)
        except NotDescent as exc:
            logger.warning("%s: search direction lost descent at step %d (%s)", self.trace.problem, self.trace.steps + 1, exc)
            return None
        if not res.converged:
            return None
        s = res.lam * d
        g_old = self.g
        snorm = float(np.linalg.norm(s))
        gnorm_old = float(np.linalg.norm(g_old))
        costheta = float(np.dot(-g_old, s)) / (gnorm_old * snorm) if snorm > 0 and gnorm_old > 0 else 0.0
        self.x = self.x + s
        self.f, self.g = res.f_new, res.g_new
        self.trace.records.append(StepRecord(
            step=self.trace.steps + 1,
            k=k,
            i=i,
            f=float(self.f),
            gnorm=float(np.linalg.norm(self.g)),
            lam=float(res.lam),
            snorm=snorm,
            costheta=min(max(costheta, 0.0), 1.0),
            elapsed=time.perf_counter() - self.start,
        ))
        if self.cfg.keep_iterates:
            self.trace.iterates.append(self.x.copy())
        return s, g_old, res.lam

    def mark_update(self, qk):
        if qk > 0 and self.trace.records:
            self.trace.records[-1].updated = True
            self.trace.records[-1].qk = qk

    def finish(self, reason):
        trace = self.trace
        trace.termination = reason
        trace.counters = EvalCounters(**self.oracle.counters.as_dict())
        trace.wall_time = time.perf_counter() - self.start
        trace.x_final = self.x.copy()
        logger.info("%s on %s: %s after %d steps, f=%.6e, |g|=%.3e",
                    trace.method, trace.problem, reason.value, trace.steps, trace.f_final, trace.gnorm_final)
        return trace


def _require(cfg, *methods):
    if cfg.method not in methods:
        raise ValueError(f"solver does not handle method {cfg.method.value}")


def _block_update(h, block, cfg):
    """블록 갱신을 적용하고 (H⁺, q_k)를 돌려줍니다. D_k가 비면 H를 그대로 둡니다."""
    if not np.all(np.isfinite(block.gs_cols)):
        raise NonFiniteValue("Hessian action is not finite")
    if cfg.lead_with_shortened_step:
        block = block.lead_with_shortened_step()
    if cfg.filtering:
        filt = filter_steps(block, cfg.tau, cfg.always_keep_first)
    else:
        try:
            filt = FilterResult.from_columns(block.s_cols, block.gs_cols)
        except SingularBlock as exc:
            logger.warning("block %d skipped without filtering: %s", block.block_index, exc)
            return h, 0
    if filt.is_empty:
        logger.debug("block %d: every column filtered, keeping H", block.block_index)
        return h, 0
    try:
        h_new = block_update_inverse(h, filt)
    except SingularBlock as exc:
        logger.warning("block %d skipped: %s", block.block_index, exc)
        return h, 0
    logger.debug("block %d: updated with %d of %d columns", block.block_index, filt.size, block.size)
    return h_new, filt.size


def solve_block_bfgs(oracle, x0, cfg):
    """
    Block BFGS: 고정된 H_k로 최대 q 스텝을 진행한 뒤, 마지막 점에서 G_k S_k 를
    계산하고 필터링한 열로 H_k 를 갱신합니다. 블록 중간에 종료하면 갱신하지 않습니다.
    """
    _require(cfg, Method.BLOCK_BFGS)
    run = _RunState(oracle, x0, cfg)
    q = cfg.resolved_q(oracle.dim)
    h = InverseApprox.identity(oracle.dim, cfg.h0_scale)
    reason = run.stop_reason()
    k = 0
    try:
        while reason is None:
            k += 1
            steps, sizes = [], []
            for i in range(1, q + 1):
                taken = run.step(h.direction(run.g), k, i)
                if taken is None:
                    reason = Termination.LINE_SEARCH_FAIL
                    break
                steps.append(taken[0])
                sizes.append(taken[2])
                reason = run.stop_reason()
                if reason is not None:
                    break
            if reason is not None:
                break
            s_cols = np.column_stack(steps)
            block = StepBlock(s_cols, run.oracle.hess_action(run.x, s_cols), block_index=k, step_sizes=sizes)
            h, qk = _block_update(h, block, cfg)
            run.mark_update(qk)
    except NonFiniteValue as exc:
        logger.warning("%s: aborting on non-finite value (%s)", oracle.name, exc)
        reason = Termination.NON_FINITE
    return run.finish(reason)


def solve_rolling_block_bfgs(oracle, x0, cfg):
    """
    Rolling Block BFGS: 매 스텝마다 최근 q 스텝 창 (새 스텝이 첫 열)으로 블록 갱신.
    헤시안 작용은 현재 점에서 창 전체에 대해 다시 계산합니다.
    """
    _require(cfg, Method.ROLLING_BLOCK_BFGS)
    run = _RunState(oracle, x0, cfg)
    q = cfg.resolved_q(oracle.dim)
    h = InverseApprox.identity(oracle.dim, cfg.h0_scale)
    window, sizes = [], []
    reason = run.stop_reason()
    k = 0
    try:
        while reason is None:
            k += 1
            taken = run.step(h.direction(run.g), k, 1)
            if taken is None:
                reason = Termination.LINE_SEARCH_FAIL
                break
            window = [taken[0]] + window[:q - 1]
            sizes = [taken[2]] + sizes[:q - 1]
            reason = run.stop_reason()
            if reason is not None:
                break
            s_cols = np.column_stack(window)
            block = StepBlock(s_cols, run.oracle.hess_action(run.x, s_cols), block_index=k, step_sizes=sizes)
            h, qk = _block_update(h, block, cfg)
            run.mark_update(qk)
    except NonFiniteValue as exc:
        logger.warning("%s: aborting on non-finite value (%s)", oracle.name, exc)
        reason = Termination.NON_FINITE
    return run.finish(reason)


def _bfgs_rule(h, s, y, g_old, lam, cfg):
    if np.dot(y, s) > CURVATURE_SAFEGUARD * np.linalg.norm(y) * np.linalg.norm(s):
        return secant_update(h, s, y), True
    return h, False


def _damped_rule(h, s, y, g_old, lam, cfg):
    # s = -λHg 이므로 Bs = -λg
    z = powell_damp(s, y, -lam * g_old, cfg.damping_phi)
    return secant_update(h, s, z), True


def _cautious_rule(h, s, y, g_old, lam, cfg):
    if np.dot(y, s) > 0 and cautious_gate(s, y, g_old, cfg.cautious_eps, cfg.cautious_exponent):
        return secant_update(h, s, y), True
    return h, False


def _modified_rule(h, s, y, g_old, lam, cfg):
    return secant_update(h, s, li_fukushima_modify(s, y, cfg.modify_eps)), True


def _no_update(h, s, y, g_old, lam, cfg):
    return h, False


_SECANT_RULES = {
    Method.BFGS: _bfgs_rule,
    Method.DAMPED_BFGS: _damped_rule,
    Method.CAUTIOUS_BFGS: _cautious_rule,
    Method.MODIFIED_BFGS: _modified_rule,
    Method.GRADIENT_DESCENT: _no_update,
}


def _solve_one_step_family(oracle, x0, cfg):
    rule = _SECANT_RULES[cfg.method]
    run = _RunState(oracle, x0, cfg)
    h = InverseApprox.identity(oracle.dim, cfg.h0_scale)
    reason = run.stop_reason()
    k = 0
    try:
        while reason is None:
            k += 1
            taken = run.step(h.direction(run.g), k, 1)
            if taken is None:
                reason = Termination.LINE_SEARCH_FAIL
                break
            s, g_old, lam = taken
            h, updated = rule(h, s, run.g - g_old, g_old, lam, cfg)
            if updated:
                run.mark_update(1)
            reason = run.stop_reason()
    except NonFiniteValue as exc:
        logger.warning("%s: aborting on non-finite value (%s)", oracle.name, exc)
        reason = Termination.NON_FINITE
    return run.finish(reason)


def solve_bfgs(oracle, x0, cfg):
    """고전 BFGS (⟨y,s⟩가 너무 작으면 갱신 생략)."""
    _require(cfg, Method.BFGS)
    return _solve_one_step_family(oracle, x0, cfg)


def solve_variant(oracle, x0, cfg):
    """DampedBFGS, CautiousBFGS, ModifiedBFGS, GradientDescent."""
    _require(cfg, Method.DAMPED_BFGS, Method.CAUTIOUS_BFGS, Method.MODIFIED_BFGS, Method.GRADIENT_DESCENT)
    return _solve_one_step_family(oracle, x0, cfg)


SOLVERS = {
    Method.BLOCK_BFGS: solve_block_bfgs,
    Method.ROLLING_BLOCK_BFGS: solve_rolling_block_bfgs,
    Method.BFGS: solve_bfgs,
    Method.DAMPED_BFGS: solve_variant,
    Method.CAUTIOUS_BFGS: solve_variant,
    Method.MODIFIED_BFGS: solve_variant,
    Method.GRADIENT_DESCENT: solve_variant,
}


def solve(oracle, x0, cfg):
    return SOLVERS[cfg.method](oracle, x0, cfg)


def convex_presets():
    """볼록 실험 구성: BFGS, B-BFGS1 (필터 없음), B-BFGS2, B-BFGS-q1, RB-BFGS, GD."""
    return {
        "BFGS": SolverConfig(method=Method.BFGS),
        "B-BFGS1": SolverConfig(method=Method.BLOCK_BFGS, use_filter=False),
        "B-BFGS2": SolverConfig(method=Method.BLOCK_BFGS, tau=1e-3),
        "B-BFGS-q1": SolverConfig(method=Method.BLOCK_BFGS, q=1, tau=1e-3),
        "RB-BFGS": SolverConfig(method=Method.ROLLING_BLOCK_BFGS, use_filter=False),
        "GD": SolverConfig(method=Method.GRADIENT_DESCENT),
    }


def nonconvex_presets():
    """비볼록 실험 구성: D-BFGS, B-BFGS, B-BFGS-q1, GD."""
    return {
        "D-BFGS": SolverConfig(method=Method.DAMPED_BFGS, damping_phi=0.2),
        "B-BFGS": SolverConfig(method=Method.BLOCK_BFGS, tau=1e-5),
        "B-BFGS-q1": SolverConfig(method=Method.BLOCK_BFGS, q=1, tau=1e-5),
        "GD": SolverConfig(method=Method.GRADIENT_DESCENT),
    }


def preset(name, nonconvex=False):
    presets = nonconvex_presets() if nonconvex else convex_presets()
    if name not in presets:
        raise KeyError(f"unknown preset {name!r}; choose from {sorted(presets)}")
    return presets[name]
