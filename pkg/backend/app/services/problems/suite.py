"""
문제 모음 매니페스트와 합성 문제 생성.

매니페스트는 (이름, 종류, 시드, 차원, 매개변수) 목록이고, 문제 데이터는 항상
ProblemSpec.seed 하나로부터 다시 만들어지므로 같은 매니페스트는 같은 문제를 줍니다.
"""

import logging
from pathlib import Path
from typing import NamedTuple

import numpy as np

from ...schemas import ProblemSpec, SuiteManifest
from ..errors import DimensionMismatch, UnknownFunction
from ..oracle import ObjectiveOracle
from .barrier import barrier_oracle, random_standard_qp, reduce_qp_to_barrier
from .benchmarks import BENCHMARKS, benchmark_oracle
from .datasets import parse_libsvm, regularizer, synthetic_classification
from .losses import logistic_oracle, tanh_oracle
from .quadratic import random_quadratic

logger = logging.getLogger(__name__)

CONDITION_NUMBERS = (10.0, 1e3, 1e5)
BENCHMARK_DIM = 10
BENCHMARK_STARTS = 3


class SuiteProblem(NamedTuple):
    name: str
    oracle: ObjectiveOracle
    x0: np.ndarray


def _build_quadratic(entry, rng):
    cond = float(entry.params.get("cond", 1e3))
    oracle = random_quadratic(rng, entry.n, cond, name=entry.name)
    return [SuiteProblem(entry.name, oracle, rng.standard_normal(entry.n))]


def _dataset(entry, rng):
    if "path" in entry.params:
        return parse_libsvm(entry.params["path"], n_features=entry.params.get("n_features"))
    return synthetic_classification(
        rng, entry.m or 10 * entry.n, entry.n,
        density=float(entry.params.get("density", 0.3)),
        separable=bool(entry.params.get("separable", False)),
    )


def _build_logistic(entry, rng):
    data = _dataset(entry, rng)
    reg = regularizer(rng, data.n, random_part=bool(entry.params.get("random_reg", False)))
    return [SuiteProblem(entry.name, logistic_oracle(data, reg, name=entry.name), np.zeros(data.n))]


def _build_tanh(entry, rng):
    data = _dataset(entry, rng)
    oracle = tanh_oracle(data, signed=bool(entry.params.get("signed", False)), name=entry.name)
    return [SuiteProblem(entry.name, oracle, np.zeros(data.n))]


def _build_barrier(entry, rng):
    p = int(entry.params.get("constraints", max(1, entry.n // 4)))
    qp, x_interior = random_standard_qp(rng, entry.n, p)
    x0 = x_interior if entry.params.get("use_generator_point", True) else None
    problem = reduce_qp_to_barrier(qp, mu=float(entry.params.get("mu", 1000.0)), x0=x0)
    return [SuiteProblem(entry.name, barrier_oracle(problem, name=entry.name), np.zeros(problem.dim))]


def _build_benchmark(entry, rng):
    function = entry.params.get("function", entry.name)
    oracle = benchmark_oracle(function, entry.n)
    starts = int(entry.params.get("starts", 1))
    problems = [SuiteProblem(entry.name if starts == 1 else f"{entry.name}-s0", oracle, oracle.standard_start())]
    for j in range(1, starts):
        problems.append(SuiteProblem(f"{entry.name}-s{j}", oracle, oracle.random_start(rng)))
    return problems


_BUILDERS = {
    "quadratic": _build_quadratic,
    "logistic": _build_logistic,
    "tanh": _build_tanh,
    "barrier": _build_barrier,
    "benchmark": _build_benchmark,
}


def build_problem(entry):
    """ProblemSpec 하나를 문제 목록으로 만듭니다 (벤치마크는 시작점마다 하나씩)."""
    try:
        builder = _BUILDERS[entry.kind]
    except KeyError:
        raise UnknownFunction(f"unknown problem kind: {entry.kind}") from None
    if entry.n < 1:
        raise DimensionMismatch(f"{entry.name}: n must be positive")
    return builder(entry, np.random.default_rng(entry.seed))


def suite_from_manifest(manifest):
    problems = []
    for entry in manifest.problems:
        problems.extend(build_problem(entry))
    logger.info("built %d problems from %d manifest entries", len(problems), len(manifest.problems))
    return problems


def synth_manifest(seed, benchmarks=False):
    """
    합성 문제 모음: 이차 함수 12개, 로지스틱 10개, tanh 5개, 장벽 QP 5개.

    benchmarks=True이면 비볼록 벤치마크 함수를 시작점 여러 개로 추가합니다.
    """
    rng = np.random.default_rng(seed)

    def next_seed():
        return int(rng.integers(0, 2 ** 31 - 1))

    specs = []
    for i in range(12):
        n = int(rng.integers(20, 101))
        cond = CONDITION_NUMBERS[i % len(CONDITION_NUMBERS)]
        specs.append(ProblemSpec(name=f"quad-{i:02d}", kind="quadratic", seed=next_seed(), n=n,
                                 params={"cond": cond}))
    for i in range(10):
        n = int(rng.integers(10, 41))
        specs.append(ProblemSpec(name=f"logistic-{i:02d}", kind="logistic", seed=next_seed(), n=n, m=8 * n,
                                 params={"separable": i % 2 == 0, "random_reg": i % 3 == 2}))
    for i in range(5):
        n = int(rng.integers(10, 21))
        specs.append(ProblemSpec(name=f"tanh-{i:02d}", kind="tanh", seed=next_seed(), n=n, m=6 * n))
    for i in range(5):
        n = int(rng.integers(12, 31))
        specs.append(ProblemSpec(name=f"barrier-{i:02d}", kind="barrier", seed=next_seed(), n=n,
                                 params={"constraints": max(1, n // 4)}))
    if benchmarks:
        for name, cls in BENCHMARKS.items():
            n = max(BENCHMARK_DIM, cls.min_dim)
            specs.append(ProblemSpec(name=name, kind="benchmark", seed=next_seed(), n=n,
                                     params={"function": name, "starts": BENCHMARK_STARTS}))
    return SuiteManifest(seed=seed, problems=specs)


def synth_suite(seed, benchmarks=False):
    return suite_from_manifest(synth_manifest(seed, benchmarks=benchmarks))


def write_manifest(manifest, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(manifest.model_dump_json(indent=2))
    return path


def load_manifest(path):
    return SuiteManifest.model_validate_json(Path(path).read_text())
