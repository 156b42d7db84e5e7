"""
비제약 최적화 벤치마크 함수 모음.

식은 1-based 인덱스(x_1..x_n)로 적었고 코드는 0-based 입니다.
각 클래스는 해석적 그래디언트와 블록 헤시안 작용을 직접 계산합니다.
"""

import numpy as np

from ..errors import BadDimension, UnknownFunction
from ..oracle import ObjectiveOracle


class BenchmarkFunction(ObjectiveOracle):
    min_dim = 1
    even_dim = False
    start_value = 1.0
    start_scale = 1.0
    formula = ""

    def __init__(self, dim):
        if dim < self.min_dim:
            raise BadDimension(f"{self.name} needs n >= {self.min_dim}, got {dim}")
        if self.even_dim and dim % 2:
            raise BadDimension(f"{self.name} needs an even n, got {dim}")
        super().__init__(dim)

    def standard_start(self):
        return np.full(self.dim, self.start_value)

    def random_start(self, rng):
        return self.standard_start() + self.start_scale * rng.uniform(-1.0, 1.0, self.dim)


class Arwhead(BenchmarkFunction):
    """Σ_{i=1}^{n-1} [(-4x_i + 3) + (x_i² + x_n²)²], 시작점 (1, …, 1)."""

    name = "arwhead"
    min_dim = 2
    formula = "sum_{i<n} (-4 x_i + 3) + (x_i^2 + x_n^2)^2"

    def value(self, x):
        u = x[:-1] ** 2 + x[-1] ** 2
        return float(np.sum(-4.0 * x[:-1] + 3.0 + u ** 2))

    def gradient(self, x):
        u = x[:-1] ** 2 + x[-1] ** 2
        g = np.empty_like(x)
        g[:-1] = -4.0 + 4.0 * u * x[:-1]
        g[-1] = 4.0 * x[-1] * np.sum(u)
        return g

    def _hess_block(self, x, v):
        head, xn = x[:-1], x[-1]
        u = head ** 2 + xn ** 2
        out = np.empty_like(v)
        cross = (8.0 * head * xn)[:, None]
        out[:-1] = (4.0 * u + 8.0 * head ** 2)[:, None] * v[:-1] + cross * v[-1]
        out[-1] = np.sum(cross * v[:-1], axis=0) + np.sum(4.0 * u + 8.0 * xn ** 2) * v[-1]
        return out


class Bdqrtic(BenchmarkFunction):
    """
    Σ_{i=1}^{n-4} [(-4x_i + 3)² + (x_i² + 2x_{i+1}² + 3x_{i+2}² + 4x_{i+3}² + 5x_n²)²],
    시작점 (1, …, 1).
    """

    name = "bdqrtic"
    min_dim = 5
    formula = "sum_{i<=n-4} (-4 x_i + 3)^2 + (x_i^2 + 2 x_{i+1}^2 + 3 x_{i+2}^2 + 4 x_{i+3}^2 + 5 x_n^2)^2"

    def _inner(self, x):
        k = self.dim - 4
        return sum((j + 1) * x[j:j + k] ** 2 for j in range(4)) + 5.0 * x[-1] ** 2

    def value(self, x):
        k = self.dim - 4
        w = self._inner(x)
        return float(np.sum((-4.0 * x[:k] + 3.0) ** 2 + w ** 2))

    def gradient(self, x):
        k = self.dim - 4
        w = self._inner(x)
        g = np.zeros_like(x)
        g[:k] += 32.0 * x[:k] - 24.0
        for j in range(4):
            g[j:j + k] += 4.0 * (j + 1) * w * x[j:j + k]
        g[-1] += 20.0 * x[-1] * np.sum(w)
        return g

    def _hess_block(self, x, v):
        k = self.dim - 4
        w = self._inner(x)
        out = np.zeros_like(v)
        out[:k] += 32.0 * v[:k]
        # w_i² 항: 2∇w∇wᵀ + 2w∇²w
        jv = sum(2.0 * (j + 1) * x[j:j + k, None] * v[j:j + k] for j in range(4)) + 10.0 * x[-1] * v[-1]
        for j in range(4):
            c = 2.0 * (j + 1)
            out[j:j + k] += 2.0 * c * x[j:j + k, None] * jv + 2.0 * c * w[:, None] * v[j:j + k]
        out[-1] += 20.0 * x[-1] * np.sum(jv, axis=0) + 20.0 * np.sum(w) * v[-1]
        return out


class Cube(BenchmarkFunction):
    """(x_1 - 1)² + Σ_{i=2}^{n} 100(x_i - x_{i-1}³)², 시작점 (-1.2, 1, -1.2, 1, …)."""

    name = "cube"
    min_dim = 2
    formula = "(x_1 - 1)^2 + sum_{i>=2} 100 (x_i - x_{i-1}^3)^2"

    def standard_start(self):
        x = np.ones(self.dim)
        x[::2] = -1.2
        return x

    def value(self, x):
        r = x[1:] - x[:-1] ** 3
        return float((x[0] - 1.0) ** 2 + 100.0 * np.sum(r ** 2))

    def gradient(self, x):
        r = x[1:] - x[:-1] ** 3
        g = np.zeros_like(x)
        g[0] = 2.0 * (x[0] - 1.0)
        g[1:] += 200.0 * r
        g[:-1] += -600.0 * r * x[:-1] ** 2
        return g

    def _hess_block(self, x, v):
        prev = x[:-1, None]
        r = (x[1:] - x[:-1] ** 3)[:, None]
        t = v[1:] - 3.0 * prev ** 2 * v[:-1]
        out = np.zeros_like(v)
        out[0] += 2.0 * v[0]
        out[1:] += 200.0 * t
        out[:-1] += -600.0 * prev ** 2 * t - 1200.0 * r * prev * v[:-1]
        return out


class DixonPrice(BenchmarkFunction):
    """(x_1 - 1)² + Σ_{i=2}^{n} i(2x_i² - x_{i-1})², 시작점 (1, …, 1)."""

    name = "dixonprice"
    min_dim = 2
    formula = "(x_1 - 1)^2 + sum_{i>=2} i (2 x_i^2 - x_{i-1})^2"

    def _weights(self):
        return np.arange(2, self.dim + 1, dtype=float)

    def value(self, x):
        r = 2.0 * x[1:] ** 2 - x[:-1]
        return float((x[0] - 1.0) ** 2 + np.sum(self._weights() * r ** 2))

    def gradient(self, x):
        c = self._weights()
        r = 2.0 * x[1:] ** 2 - x[:-1]
        g = np.zeros_like(x)
        g[0] = 2.0 * (x[0] - 1.0)
        g[1:] += 8.0 * c * r * x[1:]
        g[:-1] += -2.0 * c * r
        return g

    def _hess_block(self, x, v):
        c = self._weights()[:, None]
        cur = x[1:, None]
        r = 2.0 * cur ** 2 - x[:-1, None]
        t = 4.0 * cur * v[1:] - v[:-1]
        out = np.zeros_like(v)
        out[0] += 2.0 * v[0]
        out[1:] += 8.0 * c * cur * t + 8.0 * c * r * v[1:]
        out[:-1] += -2.0 * c * t
        return out


class Edensch(BenchmarkFunction):
    """16 + Σ_{i=1}^{n-1} [(x_i - 2)⁴ + (x_i x_{i+1} - 2x_{i+1})² + (x_{i+1} + 1)²], 시작점 0."""

    name = "edensch"
    min_dim = 2
    start_value = 0.0
    formula = "16 + sum_{i<n} (x_i - 2)^4 + (x_i x_{i+1} - 2 x_{i+1})^2 + (x_{i+1} + 1)^2"

    def value(self, x):
        a = x[:-1] - 2.0
        p = x[1:] * a
        return float(16.0 + np.sum(a ** 4 + p ** 2 + (x[1:] + 1.0) ** 2))

    def gradient(self, x):
        a = x[:-1] - 2.0
        nxt = x[1:]
        p = nxt * a
        g = np.zeros_like(x)
        g[:-1] += 4.0 * a ** 3 + 2.0 * p * nxt
        g[1:] += 2.0 * p * a + 2.0 * (nxt + 1.0)
        return g

    def _hess_block(self, x, v):
        a = (x[:-1] - 2.0)[:, None]
        nxt = x[1:, None]
        p = nxt * a
        t = nxt * v[:-1] + a * v[1:]
        out = np.zeros_like(v)
        out[:-1] += 12.0 * a ** 2 * v[:-1] + 2.0 * nxt * t + 2.0 * p * v[1:]
        out[1:] += 2.0 * a * t + 2.0 * p * v[:-1] + 2.0 * v[1:]
        return out


class Eg2(BenchmarkFunction):
    """Σ_{i=1}^{n-1} sin(x_1 + x_i² - 1) + ½ sin(x_n²), 시작점 (1, …, 1)."""

    name = "eg2"
    min_dim = 2
    formula = "sum_{i<n} sin(x_1 + x_i^2 - 1) + sin(x_n^2) / 2"

    def value(self, x):
        u = x[0] + x[:-1] ** 2 - 1.0
        return float(np.sum(np.sin(u)) + 0.5 * np.sin(x[-1] ** 2))

    def gradient(self, x):
        u = x[0] + x[:-1] ** 2 - 1.0
        cu = np.cos(u)
        g = np.zeros_like(x)
        g[0] += np.sum(cu)
        g[:-1] += 2.0 * x[:-1] * cu
        g[-1] += x[-1] * np.cos(x[-1] ** 2)
        return g

    def _hess_block(self, x, v):
        head = x[:-1, None]
        u = x[0] + head ** 2 - 1.0
        su, cu = np.sin(u), np.cos(u)
        # ∇u_i = e_1 + 2x_i e_i (i = 1이면 두 항이 겹침)
        t = v[0] + 2.0 * head * v[:-1]
        out = np.zeros_like(v)
        out[0] += np.sum(-su * t, axis=0)
        out[:-1] += -su * t * 2.0 * head + 2.0 * cu * v[:-1]
        z = x[-1] ** 2
        out[-1] += (np.cos(z) - 2.0 * z * np.sin(z)) * v[-1]
        return out


class Fletchcr(BenchmarkFunction):
    """Σ_{i=1}^{n-1} 100(x_{i+1} - x_i + 1 - x_i²)², 시작점 0."""

    name = "fletchcr"
    min_dim = 2
    start_value = 0.0
    start_scale = 0.5
    formula = "sum_{i<n} 100 (x_{i+1} - x_i + 1 - x_i^2)^2"

    def value(self, x):
        r = x[1:] - x[:-1] + 1.0 - x[:-1] ** 2
        return float(100.0 * np.sum(r ** 2))

    def gradient(self, x):
        r = x[1:] - x[:-1] + 1.0 - x[:-1] ** 2
        g = np.zeros_like(x)
        g[:-1] += 200.0 * r * (-1.0 - 2.0 * x[:-1])
        g[1:] += 200.0 * r
        return g

    def _hess_block(self, x, v):
        cur = x[:-1, None]
        r = x[1:, None] - cur + 1.0 - cur ** 2
        dr = -1.0 - 2.0 * cur
        t = dr * v[:-1] + v[1:]
        out = np.zeros_like(v)
        out[:-1] += 200.0 * dr * t - 400.0 * r * v[:-1]
        out[1:] += 200.0 * t
        return out


class Raydan1(BenchmarkFunction):
    """Σ_{i=1}^{n} (i/10)(e^{x_i} - x_i), 시작점 (1, …, 1)."""

    name = "raydan1"
    formula = "sum_i (i / 10) (exp(x_i) - x_i)"

    def _weights(self):
        return np.arange(1, self.dim + 1, dtype=float) / 10.0

    def value(self, x):
        return float(np.sum(self._weights() * (np.exp(x) - x)))

    def gradient(self, x):
        return self._weights() * (np.exp(x) - 1.0)

    def _hess_block(self, x, v):
        return (self._weights() * np.exp(x))[:, None] * v


class Rosenbrock(BenchmarkFunction):
    """확장 Rosenbrock: Σ_{j=1}^{n/2} [100(x_{2j} - x_{2j-1}²)² + (1 - x_{2j-1})²], 시작점 (-1.2, 1, …)."""

    name = "rosenbrock"
    min_dim = 2
    even_dim = True
    formula = "sum_{j<=n/2} 100 (x_{2j} - x_{2j-1}^2)^2 + (1 - x_{2j-1})^2"

    def standard_start(self):
        x = np.ones(self.dim)
        x[::2] = -1.2
        return x

    def value(self, x):
        a, b = x[0::2], x[1::2]
        return float(np.sum(100.0 * (b - a ** 2) ** 2 + (1.0 - a) ** 2))

    def gradient(self, x):
        a, b = x[0::2], x[1::2]
        r = b - a ** 2
        g = np.empty_like(x)
        g[0::2] = -400.0 * r * a - 2.0 * (1.0 - a)
        g[1::2] = 200.0 * r
        return g

    def _hess_block(self, x, v):
        a, b = x[0::2, None], x[1::2, None]
        va, vb = v[0::2], v[1::2]
        out = np.empty_like(v)
        out[0::2] = (1200.0 * a ** 2 - 400.0 * b + 2.0) * va - 400.0 * a * vb
        out[1::2] = -400.0 * a * va + 200.0 * vb
        return out


class Sinquad(BenchmarkFunction):
    """
    (x_1 - 1)⁴ + Σ_{i=2}^{n-1} (sin(x_i - x_n) - x_1² + x_i²)² + (x_n² - x_1²)²,
    시작점 (0.1, …, 0.1).
    """

    name = "sinquad"
    min_dim = 3
    start_value = 0.1
    start_scale = 0.5
    formula = "(x_1 - 1)^4 + sum_{1<i<n} (sin(x_i - x_n) - x_1^2 + x_i^2)^2 + (x_n^2 - x_1^2)^2"

    def value(self, x):
        x1, xn, mid = x[0], x[-1], x[1:-1]
        r = np.sin(mid - xn) - x1 ** 2 + mid ** 2
        return float((x1 - 1.0) ** 4 + np.sum(r ** 2) + (xn ** 2 - x1 ** 2) ** 2)

    def gradient(self, x):
        x1, xn, mid = x[0], x[-1], x[1:-1]
        d = mid - xn
        r = np.sin(d) - x1 ** 2 + mid ** 2
        e = xn ** 2 - x1 ** 2
        g = np.zeros_like(x)
        g[1:-1] += 2.0 * r * (np.cos(d) + 2.0 * mid)
        g[-1] += np.sum(-2.0 * r * np.cos(d)) + 4.0 * e * xn
        g[0] += np.sum(-4.0 * r * x1) - 4.0 * e * x1 + 4.0 * (x1 - 1.0) ** 3
        return g

    def _hess_block(self, x, v):
        x1, xn = x[0], x[-1]
        mid = x[1:-1, None]
        d = mid - xn
        sd, cd = np.sin(d), np.cos(d)
        r = sd - x1 ** 2 + mid ** 2
        e = xn ** 2 - x1 ** 2
        v1, vn, vm = v[0], v[-1], v[1:-1]

        # r_i² 항: 2∇r∇rᵀ + 2r∇²r
        t = (cd + 2.0 * mid) * vm - cd * vn - 2.0 * x1 * v1
        out = np.zeros_like(v)
        out[1:-1] += 2.0 * (cd + 2.0 * mid) * t + 2.0 * r * ((2.0 - sd) * vm + sd * vn)
        out[-1] += np.sum(-2.0 * cd * t + 2.0 * r * sd * (vm - vn), axis=0)
        out[0] += np.sum(-4.0 * x1 * t - 4.0 * r * v1, axis=0)

        te = 2.0 * xn * vn - 2.0 * x1 * v1
        out[-1] += 4.0 * xn * te + 4.0 * e * vn
        out[0] += -4.0 * x1 * te - 4.0 * e * v1 + 12.0 * (x1 - 1.0) ** 2 * v1
        return out


class Tointgss(BenchmarkFunction):
    """
    Σ_{i=1}^{n-2} (10/(n+2) + x_{i+2}²)(2 - exp(-(x_i - x_{i+1})²/(0.1 + x_{i+2}²))),
    시작점 (3, …, 3).
    """

    name = "tointgss"
    min_dim = 3
    start_value = 3.0
    formula = "sum_{i<=n-2} (10/(n+2) + x_{i+2}^2) (2 - exp(-(x_i - x_{i+1})^2 / (0.1 + x_{i+2}^2)))"

    def _parts(self, x):
        k = self.dim - 2
        delta = x[:k] - x[1:k + 1]
        c = x[2:]
        p = 10.0 / (self.dim + 2) + c ** 2
        qd = 0.1 + c ** 2
        e = np.exp(-delta ** 2 / qd)
        return delta, c, p, qd, e

    def value(self, x):
        _, _, p, _, e = self._parts(x)
        return float(np.sum(p * (2.0 - e)))

    def gradient(self, x):
        k = self.dim - 2
        delta, c, p, qd, e = self._parts(x)
        ga = 2.0 * p * e * delta / qd
        gc = 2.0 * c * (2.0 - e) - 2.0 * c * p * e * delta ** 2 / qd ** 2
        g = np.zeros_like(x)
        g[:k] += ga
        g[1:k + 1] -= ga
        g[2:] += gc
        return g

    def _hess_block(self, x, v):
        k = self.dim - 2
        delta, c, p, qd, e = self._parts(x)
        z = delta ** 2 / qd
        h_aa = 2.0 * p / qd * e * (1.0 - 2.0 * z)
        h_ac = 4.0 * c * delta * e * (1.0 / qd + p * delta ** 2 / qd ** 3 - p / qd ** 2)
        h_cc = (2.0 * (2.0 - e) - 4.0 * c ** 2 * e * delta ** 2 / qd ** 2 - 2.0 * p * e * delta ** 2 / qd ** 2
                - 4.0 * c ** 2 * delta ** 2 * e * (1.0 / qd ** 2 + p * delta ** 2 / qd ** 4 - 2.0 * p / qd ** 3))
        h_aa, h_ac, h_cc = h_aa[:, None], h_ac[:, None], h_cc[:, None]
        dv = v[:k] - v[1:k + 1]
        vc = v[2:]
        out = np.zeros_like(v)
        out[:k] += h_aa * dv + h_ac * vc
        out[1:k + 1] -= h_aa * dv + h_ac * vc
        out[2:] += h_ac * dv + h_cc * vc
        return out


class Trid(BenchmarkFunction):
    """Σ_{i=1}^{n} (x_i - 1)² - Σ_{i=2}^{n} x_i x_{i-1}, 시작점 0, 최소값 -n(n+4)(n-1)/6."""

    name = "trid"
    min_dim = 2
    start_value = 0.0
    formula = "sum_i (x_i - 1)^2 - sum_{i>=2} x_i x_{i-1}"

    def value(self, x):
        return float(np.sum((x - 1.0) ** 2) - np.sum(x[1:] * x[:-1]))

    def gradient(self, x):
        g = 2.0 * (x - 1.0)
        g[1:] -= x[:-1]
        g[:-1] -= x[1:]
        return g

    def _hess_block(self, x, v):
        out = 2.0 * v
        out[1:] -= v[:-1]
        out[:-1] -= v[1:]
        return out

    def optimal_value(self):
        n = self.dim
        return -n * (n + 4) * (n - 1) / 6.0


class DoubleWell(BenchmarkFunction):
    """Σ_{i=1}^{n} (x_i⁴ - x_i²), 비볼록 (x = 0에서 헤시안 -2I), 시작점 0.1."""

    name = "doublewell"
    start_value = 0.1
    start_scale = 0.5
    formula = "sum_i x_i^4 - x_i^2"

    def value(self, x):
        return float(np.sum(x ** 4 - x ** 2))

    def gradient(self, x):
        return 4.0 * x ** 3 - 2.0 * x

    def _hess_block(self, x, v):
        return (12.0 * x ** 2 - 2.0)[:, None] * v


BENCHMARKS = {
    cls.name: cls
    for cls in (Arwhead, Bdqrtic, Cube, DixonPrice, Edensch, Eg2, Fletchcr,
                Raydan1, Rosenbrock, Sinquad, Tointgss, Trid, DoubleWell)
}


def benchmark_oracle(name, n):
    try:
        cls = BENCHMARKS[name]
    except KeyError:
        raise UnknownFunction(f"unknown benchmark function: {name}") from None
    return cls(n)


def benchmark_start(name, n, rng=None):
    """표준 시작점. rng를 주면 표준 시작점 주변의 균등 난수 시작점."""
    oracle = benchmark_oracle(name, n)
    if rng is None:
        return oracle.standard_start()
    return oracle.random_start(rng)
