"""분류 손실 오라클: 로지스틱 회귀와 쌍곡탄젠트 손실."""

import numpy as np
from scipy.special import expit

from ..errors import DimensionMismatch
from ..oracle import ObjectiveOracle


class LogisticOracle(ObjectiveOracle):
    """
    L(w) = -(1/m) Σ log φ(y_i, x_i, w) + (1/2m) wᵀQw,
    φ = σ(x_iᵀw) (y_i = 1) 또는 1 - σ(x_iᵀw) (y_i = 0).

    -log φ = log(1 + e^z) - y z 로 계산하므로 큰 |z|에서도 넘치지 않습니다.
    """

    name = "logistic"

    def __init__(self, data, reg, name=None):
        reg = np.asarray(reg, dtype=float)
        if reg.shape != (data.n, data.n):
            raise DimensionMismatch(f"regularizer has shape {reg.shape}, expected ({data.n}, {data.n})")
        super().__init__(data.n)
        self.features = data.features
        self.labels = data.labels.astype(float)
        self.m = data.m
        self.reg = reg
        if name:
            self.name = name

    def value(self, w):
        z = self.features @ w
        return float((np.sum(np.logaddexp(0.0, z) - self.labels * z) + 0.5 * w @ self.reg @ w) / self.m)

    def gradient(self, w):
        z = self.features @ w
        return (self.features.T @ (expit(z) - self.labels) + self.reg @ w) / self.m

    def value_and_gradient(self, w):
        z = self.features @ w
        qw = self.reg @ w
        f = (np.sum(np.logaddexp(0.0, z) - self.labels * z) + 0.5 * w @ qw) / self.m
        g = (self.features.T @ (expit(z) - self.labels) + qw) / self.m
        return float(f), g

    def _hess_block(self, w, v):
        p = expit(self.features @ w)
        weights = p * (1.0 - p)
        return (self.features.T @ (weights[:, None] * (self.features @ v)) + self.reg @ v) / self.m

    @property
    def has_hessian(self):
        return True

    def hessian(self, w):
        return self._hess_block(w, np.eye(self.dim))


class TanhOracle(ObjectiveOracle):
    """
    L(w) = (1/m) Σ (1 - tanh(y_i x_iᵀw)) + (1/2m)‖w‖².

    레이블은 식 그대로 곱해집니다 (y ∈ {0,1}). signed=True이면 2y - 1 ∈ {-1,+1}.
    """

    name = "tanh"

    def __init__(self, data, signed=False, name=None):
        super().__init__(data.n)
        self.features = data.features
        labels = data.labels.astype(float)
        self.labels = 2.0 * labels - 1.0 if signed else labels
        self.m = data.m
        if name:
            self.name = name

    def value(self, w):
        t = np.tanh(self.labels * (self.features @ w))
        return float((np.sum(1.0 - t) + 0.5 * w @ w) / self.m)

    def gradient(self, w):
        t = np.tanh(self.labels * (self.features @ w))
        return (-(self.features.T @ ((1.0 - t * t) * self.labels)) + w) / self.m

    def _hess_block(self, w, v):
        t = np.tanh(self.labels * (self.features @ w))
        weights = 2.0 * self.labels ** 2 * t * (1.0 - t * t)
        return (self.features.T @ (weights[:, None] * (self.features @ v)) + v) / self.m


def logistic_oracle(data, reg, name=None):
    return LogisticOracle(data, reg, name=name)


def tanh_oracle(data, signed=False, name=None):
    return TanhOracle(data, signed=signed, name=name)
