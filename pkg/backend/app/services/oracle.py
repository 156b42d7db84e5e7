"""
목적 함수 인터페이스: 함수값, 그래디언트, 방향 블록에 대한 헤시안 작용 G(x)V.

유한차분 검증 함수(check_*)는 자동 미분 대신 해석적 도함수를 검증하는 데 씁니다.
"""

import logging
import threading
from abc import ABC, abstractmethod
from dataclasses import asdict, dataclass

import numpy as np

from .errors import DimensionMismatch, NonFiniteValue

logger = logging.getLogger(__name__)

FD_STEP = 1e-5
# ‖Gv‖ = 0 일 때 0으로 나누지 않기 위한 하한
RELATIVE_FLOOR = 1e-12


class ObjectiveOracle(ABC):
    """f, ∇f, 헤시안 작용을 제공하는 불변 객체. 평가는 스레드 안전해야 합니다."""

    name = "objective"

    def __init__(self, dim):
        if dim < 1:
            raise DimensionMismatch(f"dimension must be positive, got {dim}")
        self.dim = int(dim)

    @abstractmethod
    def value(self, x):
        ...

    @abstractmethod
    def gradient(self, x):
        ...

    @abstractmethod
    def _hess_block(self, x, v):
        """v: (dim, q) 방향 블록 → G(x) v."""

    def value_and_gradient(self, x):
        return self.value(x), self.gradient(x)

    def hess_action(self, x, v):
        v = np.asarray(v, dtype=float)
        if v.shape[0] != self.dim:
            raise DimensionMismatch(f"directions have {v.shape[0]} rows, expected {self.dim}")
        out = self._hess_block(np.asarray(x, dtype=float), v.reshape(self.dim, -1))
        return out.reshape(v.shape)

    @property
    def has_hessian(self):
        return False

    def hessian(self, x):
        raise NotImplementedError(f"{self.name} provides Hessian actions only")


class FunctionOracle(ObjectiveOracle):
    """콜러블로 구성하는 오라클. hess_action이 없으면 hessian(x) @ V를 씁니다."""

    def __init__(self, dim, f, grad, hess_action=None, hessian=None, name="function"):
        super().__init__(dim)
        if hess_action is None and hessian is None:
            raise ValueError("either hess_action or hessian is required")
        self._f = f
        self._grad = grad
        self._hess_action = hess_action
        self._hessian = hessian
        self.name = name

    def value(self, x):
        return float(self._f(np.asarray(x, dtype=float)))

    def gradient(self, x):
        return np.asarray(self._grad(np.asarray(x, dtype=float)), dtype=float).reshape(self.dim)

    def _hess_block(self, x, v):
        if self._hess_action is not None:
            return np.asarray(self._hess_action(x, v), dtype=float).reshape(v.shape)
        return self.hessian(x) @ v

    @property
    def has_hessian(self):
        return self._hessian is not None

    def hessian(self, x):
        if self._hessian is None:
            return super().hessian(x)
        return np.asarray(self._hessian(np.asarray(x, dtype=float)), dtype=float)


@dataclass
class EvalCounters:
    n_f: int = 0
    n_grad: int = 0
    n_hess_action_cols: int = 0

    def as_dict(self):
        return asdict(self)

    def merge(self, other):
        return EvalCounters(
            n_f=self.n_f + other.n_f,
            n_grad=self.n_grad + other.n_grad,
            n_hess_action_cols=self.n_hess_action_cols + other.n_hess_action_cols,
        )


class CountingOracle(ObjectiveOracle):
    """실행 단위로 평가 횟수를 세는 래퍼. 헤시안 작용은 열 하나당 1회로 셉니다."""

    def __init__(self, inner):
        super().__init__(inner.dim)
        self.inner = inner
        self.name = inner.name
        self.counters = EvalCounters()
        self._lock = threading.Lock()

    def value(self, x):
        with self._lock:
            self.counters.n_f += 1
        return self.inner.value(x)

    def gradient(self, x):
        with self._lock:
            self.counters.n_grad += 1
        return self.inner.gradient(x)

    def value_and_gradient(self, x):
        with self._lock:
            self.counters.n_f += 1
            self.counters.n_grad += 1
        return self.inner.value_and_gradient(x)

    def _hess_block(self, x, v):
        with self._lock:
            self.counters.n_hess_action_cols += v.shape[1]
        return self.inner.hess_action(x, v)

    @property
    def has_hessian(self):
        return self.inner.has_hessian

    def hessian(self, x):
        return self.inner.hessian(x)


def default_step(x):
    return FD_STEP * (1.0 + float(np.linalg.norm(x)))


def _finite_value(oracle, x):
    f = oracle.value(x)
    if not np.isfinite(f):
        raise NonFiniteValue(f"{oracle.name}: f is not finite at a finite-difference point")
    return f


def _finite_gradient(oracle, x):
    g = oracle.gradient(x)
    if not np.all(np.isfinite(g)):
        raise NonFiniteValue(f"{oracle.name}: gradient is not finite at a finite-difference point")
    return g


def check_gradient(oracle, x, h=None):
    """중심차분 그래디언트와의 성분별 최대 상대오차 (분모 max(1, |g_i|))."""
    x = np.asarray(x, dtype=float)
    h = default_step(x) if h is None else h
    if h <= 0:
        raise ValueError("finite-difference step must be positive")
    g = _finite_gradient(oracle, x)
    err = 0.0
    for i in range(oracle.dim):
        e = np.zeros_like(x)
        e[i] = h
        fd = (_finite_value(oracle, x + e) - _finite_value(oracle, x - e)) / (2 * h)
        err = max(err, abs(fd - g[i]) / max(1.0, abs(g[i])))
    return err


def check_hess_action(oracle, x, v, h=None):
    """
    G(x)v 와 (g(x+hv) - g(x-hv)) / 2h 의 상대오차 (유클리드 노름, 분모 ‖Gv‖ + RELATIVE_FLOOR).

    h는 교란 x ± h·v/‖v‖ 의 크기이므로 v의 스케일과 무관합니다.
    """
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    action = oracle.hess_action(x, v.reshape(-1, 1)).ravel()
    if not np.all(np.isfinite(action)):
        raise NonFiniteValue(f"{oracle.name}: Hessian action is not finite")
    vnorm = float(np.linalg.norm(v))
    if vnorm == 0.0:
        return float(np.linalg.norm(action))
    h = default_step(x) if h is None else h
    t = h / vnorm
    fd = (_finite_gradient(oracle, x + t * v) - _finite_gradient(oracle, x - t * v)) / (2 * t)
    return float(np.linalg.norm(action - fd) / (np.linalg.norm(action) + RELATIVE_FLOOR))


def check_symmetry(oracle, x, u, v):
    gu = oracle.hess_action(x, u)
    gv = oracle.hess_action(x, v)
    scale = np.linalg.norm(gu) * np.linalg.norm(v) + np.linalg.norm(u) * np.linalg.norm(gv)
    if scale == 0.0:
        return 0.0
    return float(abs(np.dot(gu, v) - np.dot(u, gv)) / scale)


def check_linearity(oracle, x, u, v, alpha, beta):
    gu = oracle.hess_action(x, u)
    gv = oracle.hess_action(x, v)
    combo = oracle.hess_action(x, alpha * u + beta * v)
    size = abs(alpha) * np.linalg.norm(u) + abs(beta) * np.linalg.norm(v)
    if size == 0.0:
        return float(np.linalg.norm(combo))
    curvature = max(np.linalg.norm(gu) / max(np.linalg.norm(u), 1e-300),
                    np.linalg.norm(gv) / max(np.linalg.norm(v), 1e-300), 1.0)
    return float(np.linalg.norm(combo - alpha * gu - beta * gv) / (size * curvature))


def derivative_report(oracle, x, rng):
    """검증 게이트에서 쓰는 네 가지 검사 결과."""
    x = np.asarray(x, dtype=float)
    u = rng.standard_normal(oracle.dim)
    v = rng.standard_normal(oracle.dim)
    u /= np.linalg.norm(u)
    v /= np.linalg.norm(v)
    report = {
        "gradient": check_gradient(oracle, x),
        "hess_action": check_hess_action(oracle, x, v),
        "symmetry": check_symmetry(oracle, x, u, v),
        "linearity": check_linearity(oracle, x, u, v, *rng.uniform(-2.0, 2.0, size=2)),
    }
    logger.debug("derivative report for %s: %s", oracle.name, report)
    return report
