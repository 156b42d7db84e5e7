"""
표준형 이차계획 min ½xᵀQx + cᵀx, Ax = b, x ≥ 0 을 로그 장벽 비제약 문제로 바꿉니다.

x = x₀ + Ny (N: A의 영공간 기저, x₀: 엄밀한 내부 가능해) 로 치환하면
F(y) = ½yᵀQ̄y + c̄ᵀy - μ Σ log(b̄ - Āy),
Q̄ = NᵀQN, c̄ = Nᵀ(c + Qx₀), Ā = -N, b̄ = x₀ 이고 정의역 밖에서 F = +∞ 입니다.
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy.linalg import null_space
from scipy.optimize import linprog

from ..errors import DimensionMismatch, Infeasible, RankDeficient
from ..linalg import symmetrize
from ..oracle import ObjectiveOracle

logger = logging.getLogger(__name__)

RANK_TOL = 1e-10
INTERIOR_MARGIN = 1e-9
DEFAULT_MU = 1000.0


@dataclass(frozen=True)
class QpStandardForm:
    q: np.ndarray
    c: np.ndarray
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        p, n = np.shape(self.a)
        if np.shape(self.q) != (n, n) or np.shape(self.c) != (n,) or np.shape(self.b) != (p,):
            raise DimensionMismatch(
                f"inconsistent shapes Q{np.shape(self.q)} c{np.shape(self.c)} "
                f"A{np.shape(self.a)} b{np.shape(self.b)}")

    @property
    def n(self):
        return self.a.shape[1]

    def objective(self, x):
        return float(0.5 * x @ self.q @ x + self.c @ x)


@dataclass(frozen=True)
class BarrierProblem:
    qbar: np.ndarray
    cbar: np.ndarray
    abar: np.ndarray
    bbar: np.ndarray
    mu: float = DEFAULT_MU
    basis: np.ndarray = None
    x0: np.ndarray = None

    @property
    def dim(self):
        return self.qbar.shape[0]

    def recover(self, y):
        """y → 원래 변수 x = x₀ + Ny."""
        return self.x0 + self.basis @ np.asarray(y, dtype=float)


def strictly_feasible_point(a, b):
    """
    max t s.t. Ax = b, x ≥ t·1, t ≤ 1 을 풀어 모든 성분이 양수인 가능해를 찾습니다.

    최적 t가 0 이하이면 내부점이 없으므로 Infeasible.
    """
    p, n = a.shape
    cost = np.zeros(n + 1)
    cost[-1] = -1.0
    a_eq = np.hstack([a, np.zeros((p, 1))])
    a_ub = np.hstack([-np.eye(n), np.ones((n, 1))])
    bounds = [(0, None)] * n + [(None, 1.0)]
    res = linprog(cost, A_ub=a_ub, b_ub=np.zeros(n), A_eq=a_eq, b_eq=b, bounds=bounds, method="highs")
    if res.status != 0 or -res.fun <= INTERIOR_MARGIN:
        raise Infeasible(f"no strictly feasible point (status={res.status}: {res.message})")
    return res.x[:n]


def reduce_qp_to_barrier(qp, mu=DEFAULT_MU, x0=None):
    a = np.asarray(qp.a, dtype=float)
    b = np.asarray(qp.b, dtype=float)
    singular_values = np.linalg.svd(a, compute_uv=False)
    rank = int(np.sum(singular_values > RANK_TOL * max(singular_values[0], 1.0))) if singular_values.size else 0
    if rank < a.shape[0]:
        raise RankDeficient(f"A has rank {rank} < {a.shape[0]} rows")

    basis = null_space(a, rcond=RANK_TOL)
    if basis.shape[1] == 0:
        raise DimensionMismatch("the feasible set is a single point")

    if x0 is None:
        x0 = strictly_feasible_point(a, b)
    else:
        x0 = np.asarray(x0, dtype=float)
        residual = np.linalg.norm(a @ x0 - b)
        if np.any(x0 <= 0) or residual > 1e-8 * (1.0 + np.linalg.norm(b)):
            raise Infeasible(f"x0 is not strictly feasible (min x0={x0.min():.3e}, residual={residual:.3e})")

    qbar = symmetrize(basis.T @ qp.q @ basis)
    cbar = basis.T @ (qp.c + qp.q @ x0)
    logger.debug("barrier reduction: n=%d -> %d, mu=%g", a.shape[1], basis.shape[1], mu)
    return BarrierProblem(qbar=qbar, cbar=cbar, abar=-basis, bbar=x0.copy(), mu=mu, basis=basis, x0=x0)


class BarrierOracle(ObjectiveOracle):
    """정의역 밖에서 함수값은 +∞, 그래디언트와 헤시안 작용은 NaN."""

    name = "barrier"

    def __init__(self, problem, name=None):
        super().__init__(problem.dim)
        self.problem = problem
        if name:
            self.name = name

    def _slack(self, y):
        return self.problem.bbar - self.problem.abar @ y

    def value(self, y):
        r = self._slack(y)
        if np.any(r <= 0):
            return float("inf")
        p = self.problem
        return float(0.5 * y @ p.qbar @ y + p.cbar @ y - p.mu * np.sum(np.log(r)))

    def gradient(self, y):
        r = self._slack(y)
        if np.any(r <= 0):
            return np.full(self.dim, np.nan)
        p = self.problem
        return p.qbar @ y + p.cbar + p.mu * (p.abar.T @ (1.0 / r))

    def _hess_block(self, y, v):
        r = self._slack(y)
        if np.any(r <= 0):
            return np.full(v.shape, np.nan)
        p = self.problem
        return p.qbar @ v + p.mu * (p.abar.T @ ((1.0 / r ** 2)[:, None] * (p.abar @ v)))

    @property
    def has_hessian(self):
        return True

    def hessian(self, y):
        return self._hess_block(y, np.eye(self.dim))


def barrier_oracle(problem, name=None):
    return BarrierOracle(problem, name=name)


def random_standard_qp(rng, n, p):
    """
    유계인 가능 영역을 갖는 랜덤 표준형 QP와 내부 가능해.

    A의 첫 행은 1ᵀ (x의 합 고정)이라 {x ≥ 0, Ax = b}가 유계입니다.
    """
    if not 1 <= p < n:
        raise DimensionMismatch(f"need 1 <= p < n, got p={p}, n={n}")
    a = rng.standard_normal((p, n))
    a[0] = 1.0
    x_interior = rng.uniform(0.5, 1.5, n)
    r = rng.standard_normal((n, n))
    qp = QpStandardForm(q=r.T @ r / n, c=rng.standard_normal(n), a=a, b=a @ x_interior)
    return qp, x_interior
