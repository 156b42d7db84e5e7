"""조건수를 지정한 랜덤 볼록 이차 함수."""

import numpy as np

from ..linalg import solve_spd, symmetrize
from ..oracle import ObjectiveOracle


class QuadraticOracle(ObjectiveOracle):
    """
    f(x) = ½(x - c)ᵀA(x - c), A 대칭 양의 정부호, 최소값 0.

    ½xᵀAx - bᵀx (b = Ac)와 상수만 다르고, 최적점 근처에서도 함수값의
    유효숫자가 남아 선탐색의 충분 감소 비교가 의미를 가집니다.
    """

    name = "quadratic"

    def __init__(self, a, center, name=None):
        a = symmetrize(np.asarray(a, dtype=float))
        super().__init__(a.shape[0])
        self.a = a
        self.center = np.asarray(center, dtype=float).reshape(self.dim)
        if name:
            self.name = name

    def value(self, x):
        e = x - self.center
        return float(0.5 * e @ self.a @ e)

    def gradient(self, x):
        return self.a @ (x - self.center)

    def _hess_block(self, x, v):
        return self.a @ v

    @property
    def has_hessian(self):
        return True

    def hessian(self, x):
        return self.a

    @property
    def linear_term(self):
        return self.a @ self.center

    def minimizer(self):
        """Ax = b 를 직접 풀어 얻은 최적점."""
        return solve_spd(self.a, self.linear_term)


def random_spd(rng, n, cond):
    """고유값이 [1, cond]에 로그 간격으로 놓인 QΛQᵀ."""
    q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    eigenvalues = np.logspace(0.0, np.log10(cond), n)
    return symmetrize((q * eigenvalues) @ q.T)


def random_quadratic(rng, n, cond, name=None):
    return QuadraticOracle(random_spd(rng, n, cond), rng.standard_normal(n), name=name)
