"""
밀집 행렬 커널: 피벗 없는 LΣLᵀ 분해, SPD 선형계 풀이, 행렬식, 노름.

모든 함수는 입력을 변경하지 않는 순수 함수입니다. 대칭 행렬은 하삼각과
대각만 읽으므로 대칭성은 구조적으로 보장됩니다.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from .errors import DegenerateFactor, DimensionMismatch, NonFiniteValue, NotPositiveDefinite

# 허용 오차 상수 (테스트도 이 값을 참조)
RECONSTRUCTION_TOL = 1e-10
COMPARISON_TOL = 1e-8


@dataclass(frozen=True)
class LdltFactor:
    """a = L · diag(pivots) · Lᵀ, L은 대각이 1인 하삼각."""

    lower: np.ndarray
    pivots: np.ndarray

    @property
    def dim(self):
        return self.pivots.shape[0]

    @property
    def is_positive_definite(self):
        return bool(np.all(self.pivots > 0))

    def reconstruct(self):
        return (self.lower * self.pivots) @ self.lower.T

    def solve(self, b):
        if not self.is_positive_definite:
            raise NotPositiveDefinite("factor has non-positive pivots")
        b = np.asarray(b, dtype=float)
        if b.shape[0] != self.dim:
            raise DimensionMismatch(f"rhs has {b.shape[0]} rows, factor has {self.dim}")
        y = solve_triangular(self.lower, b, lower=True, unit_diagonal=True)
        y = y / (self.pivots if y.ndim == 1 else self.pivots[:, None])
        return solve_triangular(self.lower.T, y, lower=False, unit_diagonal=True)

    def determinant(self):
        return float(np.prod(self.pivots))


def symmetrize(a):
    a = np.asarray(a, dtype=float)
    return 0.5 * (a + a.T)


def _check_square(a):
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise DimensionMismatch(f"expected a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NonFiniteValue("matrix has non-finite entries")
    return a


def ldlt(a, strict=False):
    """
    피벗 없이 열 순서를 유지하는 LΣLᵀ 분해.

    strict=True이면 0 이하의 피벗에서 NotPositiveDefinite를 던집니다.
    strict=False이면 음수 피벗도 그대로 돌려주지만, 뒤에 열이 남아 있는데
    피벗이 정확히 0이면 분해를 이어갈 수 없으므로 DegenerateFactor를 던집니다.
    """
    a = _check_square(a)
    n = a.shape[0]
    lower = np.eye(n)
    pivots = np.zeros(n)
    for j in range(n):
        lj = lower[j, :j]
        pivots[j] = a[j, j] - np.dot(lj * lj, pivots[:j])
        if strict and pivots[j] <= 0:
            raise NotPositiveDefinite(f"pivot {j} is {pivots[j]:.3e}")
        if j == n - 1:
            break
        if pivots[j] == 0:
            raise DegenerateFactor(f"zero pivot at column {j}")
        lower[j + 1:, j] = (a[j + 1:, j] - lower[j + 1:, :j] @ (lj * pivots[:j])) / pivots[j]
    return LdltFactor(lower=lower, pivots=pivots)


def solve_spd(a, b):
    return ldlt(a, strict=True).solve(b)


def det_spd(a):
    return ldlt(a, strict=True).determinant()


def frobenius_norm(a):
    return float(np.linalg.norm(a, "fro"))


def operator_norm(a):
    return float(np.linalg.norm(a, 2))


def weighted_norm(x, g):
    """‖X‖_G = Tr(X G Xᵀ G), 역 업데이트의 변분 문제에서 쓰는 노름."""
    return float(np.trace(x @ g @ x.T @ g))
