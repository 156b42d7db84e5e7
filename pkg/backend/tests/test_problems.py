import numpy as np
import pytest
from scipy import sparse

from app.schemas import ProblemSpec, SuiteManifest
from app.services.bench import check_suite
from app.services.errors import (
    BadDimension,
    DimensionMismatch,
    EmptyDataset,
    Infeasible,
    ParseError,
    RankDeficient,
    UnknownFunction,
)
from app.services.oracle import check_gradient, check_hess_action
from app.services.problems import (
    BENCHMARKS,
    BarrierProblem,
    QpStandardForm,
    SparseDataset,
    barrier_oracle,
    benchmark_oracle,
    benchmark_start,
    build_problem,
    load_manifest,
    logistic_oracle,
    parse_libsvm,
    random_quadratic,
    random_standard_qp,
    reduce_qp_to_barrier,
    regularizer,
    strictly_feasible_point,
    synth_manifest,
    synth_suite,
    synthetic_classification,
    tanh_oracle,
    write_manifest,
)


def tiny_dataset(labels):
    features = sparse.csr_matrix(np.array([[1.0, 0.0], [0.0, 2.0], [1.0, 1.0]]))
    return SparseDataset(labels=np.array(labels), features=features)


# 분류 손실

def test_logistic_value_at_zero(rng):
    data = synthetic_classification(rng, 50, 8)
    oracle = logistic_oracle(data, regularizer(rng, 8))
    assert oracle.value(np.zeros(8)) == pytest.approx(np.log(2.0))


def test_logistic_with_all_zero_labels():
    oracle = logistic_oracle(tiny_dataset([0, 0, 0]), np.eye(2))
    assert oracle.value(np.zeros(2)) == pytest.approx(np.log(2.0))
    # 모든 레이블이 0이면 w를 음의 방향으로 움직일수록 손실이 줄어듭니다
    assert oracle.value(np.array([-1.0, -1.0])) < oracle.value(np.zeros(2))


def test_logistic_large_margins_stay_finite():
    oracle = logistic_oracle(tiny_dataset([1, 0, 1]), np.eye(2))
    w = np.array([1e3, -1e3])
    assert np.isfinite(oracle.value(w))
    assert np.all(np.isfinite(oracle.gradient(w)))


def test_logistic_regularizer_shape(rng):
    data = synthetic_classification(rng, 10, 4)
    with pytest.raises(DimensionMismatch):
        logistic_oracle(data, np.eye(3))


def test_logistic_hessian_is_positive_definite(rng):
    data = synthetic_classification(rng, 40, 6)
    oracle = logistic_oracle(data, regularizer(rng, 6, random_part=True))
    assert np.linalg.eigvalsh(oracle.hessian(rng.standard_normal(6))).min() > 0


def test_tanh_value_at_zero(rng):
    data = synthetic_classification(rng, 30, 5)
    assert tanh_oracle(data).value(np.zeros(5)) == pytest.approx(1.0)
    assert tanh_oracle(data, signed=True).value(np.zeros(5)) == pytest.approx(1.0)


def test_tanh_with_all_zero_labels():
    oracle = tanh_oracle(tiny_dataset([0, 0, 0]))
    w = np.array([0.7, -1.2])
    assert oracle.value(w) == pytest.approx(1.0 + w @ w / 6.0)
    np.testing.assert_allclose(oracle.gradient(np.zeros(2)), np.zeros(2))


def test_tanh_derivatives(rng):
    data = synthetic_classification(rng, 30, 5, density=0.6)
    oracle = tanh_oracle(data, signed=True)
    x = 0.5 * rng.standard_normal(5)
    assert check_gradient(oracle, x) <= 1e-6
    assert check_hess_action(oracle, x, rng.standard_normal(5)) <= 1e-5


# 데이터셋

def test_parse_libsvm_example(tmp_path):
    path = tmp_path / "toy.libsvm"
    path.write_text("1 1:0.5 3:2\n-1 2:1\n")
    data = parse_libsvm(path)
    assert (data.m, data.n) == (2, 3)
    np.testing.assert_array_equal(data.labels, [1, 0])
    np.testing.assert_allclose(data.features.toarray(), [[0.5, 0.0, 2.0], [0.0, 1.0, 0.0]])


def test_parse_libsvm_comments_and_blank_lines(tmp_path):
    path = tmp_path / "toy.libsvm"
    path.write_text("# header\n\n2 1:1 # trailing\n1 2:3\n")
    data = parse_libsvm(path, n_features=4)
    assert (data.m, data.n) == (2, 4)
    np.testing.assert_array_equal(data.labels, [1, 0])


def test_parse_libsvm_single_label(tmp_path):
    path = tmp_path / "toy.libsvm"
    path.write_text("1 1:1\n1 2:1\n")
    np.testing.assert_array_equal(parse_libsvm(path).labels, [1, 1])


def test_parse_libsvm_empty_file(tmp_path):
    path = tmp_path / "empty.libsvm"
    path.write_text("")
    with pytest.raises(EmptyDataset):
        parse_libsvm(path)


@pytest.mark.parametrize("content,line", [
    ("1 3:1 2:1\n", 1),
    ("1 1:1\n0 0:1\n", 2),
    ("1 1:1\nx 1:1\n", 2),
    ("1 1:nan\n", 1),
    ("1 1=2\n", 1),
    ("1 1:1\n2 1:1\n3 1:1\n", None),
])
def test_parse_libsvm_errors(tmp_path, content, line):
    path = tmp_path / "bad.libsvm"
    path.write_text(content)
    with pytest.raises(ParseError) as exc:
        parse_libsvm(path)
    assert exc.value.line_number == line


def test_parse_libsvm_index_beyond_declared_features(tmp_path):
    path = tmp_path / "toy.libsvm"
    path.write_text("1 5:1\n")
    with pytest.raises(ParseError):
        parse_libsvm(path, n_features=3)


def test_dataset_row_mismatch():
    with pytest.raises(DimensionMismatch):
        SparseDataset(labels=np.array([0, 1]), features=sparse.csr_matrix(np.eye(3)))


def test_separable_labels_follow_hidden_weights(rng):
    data = synthetic_classification(rng, 200, 5, separable=True)
    assert set(np.unique(data.labels)) <= {0, 1}
    assert 0 < data.labels.sum() < data.m


# 장벽 문제

def test_barrier_reduction_example():
    qp = QpStandardForm(q=np.eye(2), c=np.zeros(2), a=np.array([[1.0, 1.0]]), b=np.array([1.0]))
    problem = reduce_qp_to_barrier(qp)
    np.testing.assert_allclose(problem.qbar, [[1.0]], atol=1e-12)
    np.testing.assert_allclose(problem.bbar, [0.5, 0.5], atol=1e-7)
    oracle = barrier_oracle(problem)
    assert oracle.dim == 1
    assert oracle.value(np.zeros(1)) == pytest.approx(2000.0 * np.log(2.0))
    # y가 커지면 한 성분이 0을 지나 정의역을 벗어납니다
    assert oracle.value(np.array([10.0])) == np.inf
    assert np.all(np.isnan(oracle.gradient(np.array([10.0]))))


def test_one_dimensional_barrier_domain():
    problem = BarrierProblem(qbar=np.zeros((1, 1)), cbar=np.zeros(1), abar=-np.ones((1, 1)), bbar=np.ones(1), mu=1.0)
    oracle = barrier_oracle(problem)
    assert oracle.value(np.zeros(1)) == 0.0
    assert oracle.value(np.array([1.0])) == pytest.approx(-np.log(2.0))
    assert oracle.value(np.array([-1.0])) == np.inf
    assert oracle.value(np.array([-2.0])) == np.inf
    np.testing.assert_allclose(oracle.gradient(np.zeros(1)), [-1.0])


def test_barrier_recover_satisfies_constraints(rng):
    qp, x_interior = random_standard_qp(rng, 12, 3)
    problem = reduce_qp_to_barrier(qp, x0=x_interior)
    y = 1e-3 * rng.standard_normal(problem.dim)
    x = problem.recover(y)
    np.testing.assert_allclose(qp.a @ x, qp.b, atol=1e-9)
    assert np.all(x > 0)


def test_barrier_derivatives(rng):
    qp, x_interior = random_standard_qp(rng, 10, 2)
    oracle = barrier_oracle(reduce_qp_to_barrier(qp, x0=x_interior))
    y = 1e-3 * rng.standard_normal(oracle.dim)
    assert check_gradient(oracle, y) <= 1e-5
    assert check_hess_action(oracle, y, rng.standard_normal(oracle.dim)) <= 1e-4


def test_strictly_feasible_point(rng):
    qp, _ = random_standard_qp(rng, 8, 2)
    x = strictly_feasible_point(qp.a, qp.b)
    assert np.all(x > 0)
    np.testing.assert_allclose(qp.a @ x, qp.b, atol=1e-7)


def test_barrier_rank_deficient():
    a = np.array([[1.0, 1.0, 0.0], [2.0, 2.0, 0.0]])
    qp = QpStandardForm(q=np.eye(3), c=np.zeros(3), a=a, b=np.array([1.0, 2.0]))
    with pytest.raises(RankDeficient):
        reduce_qp_to_barrier(qp)


def test_barrier_infeasible():
    qp = QpStandardForm(q=np.eye(2), c=np.zeros(2), a=np.array([[1.0, 1.0]]), b=np.array([-1.0]))
    with pytest.raises(Infeasible):
        reduce_qp_to_barrier(qp)
    with pytest.raises(Infeasible):
        reduce_qp_to_barrier(qp, x0=np.array([0.5, -1.5]))


def test_barrier_shape_check():
    with pytest.raises(DimensionMismatch):
        QpStandardForm(q=np.eye(3), c=np.zeros(2), a=np.ones((1, 2)), b=np.ones(1))


# 벤치마크 함수

def test_rosenbrock_minimum():
    oracle = benchmark_oracle("rosenbrock", 4)
    assert oracle.value(np.ones(4)) == 0.0
    np.testing.assert_array_equal(oracle.gradient(np.ones(4)), np.zeros(4))
    np.testing.assert_array_equal(oracle.standard_start(), [-1.2, 1.0, -1.2, 1.0])


def test_trid_optimum():
    oracle = benchmark_oracle("trid", 6)
    x_star = np.array([i * (6 + 1 - i) for i in range(1, 7)], dtype=float)
    assert oracle.value(x_star) == pytest.approx(oracle.optimal_value())
    assert oracle.optimal_value() == pytest.approx(-50.0)
    np.testing.assert_allclose(oracle.gradient(x_star), np.zeros(6), atol=1e-12)


def test_eg2_gradient_at_zero():
    oracle = benchmark_oracle("eg2", 3)
    g = oracle.gradient(np.zeros(3))
    np.testing.assert_allclose(g, [2.0 * np.cos(-1.0), 0.0, 0.0], atol=1e-15)


def test_doublewell_curvature_at_origin():
    oracle = benchmark_oracle("doublewell", 3)
    np.testing.assert_allclose(oracle.hess_action(np.zeros(3), np.eye(3)), -2.0 * np.eye(3))


@pytest.mark.parametrize("name", sorted(BENCHMARKS))
def test_benchmark_derivatives(rng, name):
    cls = BENCHMARKS[name]
    n = max(10, cls.min_dim)
    oracle = benchmark_oracle(name, n)
    for x in (oracle.standard_start(), oracle.random_start(rng), oracle.random_start(rng)):
        v = rng.standard_normal(n)
        assert check_gradient(oracle, x) <= 1e-5
        assert check_hess_action(oracle, x, v) <= 1e-4
        block = rng.standard_normal((n, 3))
        columns = np.column_stack([oracle.hess_action(x, block[:, j]) for j in range(3)])
        np.testing.assert_allclose(oracle.hess_action(x, block), columns, rtol=1e-12, atol=1e-10)


def test_benchmark_lookup_errors():
    with pytest.raises(UnknownFunction):
        benchmark_oracle("nope", 4)
    with pytest.raises(BadDimension):
        benchmark_oracle("rosenbrock", 3)
    with pytest.raises(BadDimension):
        benchmark_oracle("bdqrtic", 4)


def test_benchmark_random_start(rng):
    x = benchmark_start("fletchcr", 5, rng)
    assert np.all(np.abs(x) <= 0.5)
    np.testing.assert_array_equal(benchmark_start("edensch", 3), np.zeros(3))


# 문제 모음

def test_quadratic_minimizer_is_center(rng):
    oracle = random_quadratic(rng, 8, 1e3)
    np.testing.assert_allclose(oracle.minimizer(), oracle.center, rtol=1e-8, atol=1e-8)
    assert oracle.value(oracle.center) == 0.0
    eig = np.linalg.eigvalsh(oracle.a)
    assert eig.max() / eig.min() == pytest.approx(1e3, rel=1e-6)


def test_synth_manifest_counts():
    manifest = synth_manifest(42)
    kinds = [entry.kind for entry in manifest.problems]
    assert kinds.count("quadratic") == 12
    assert kinds.count("logistic") == 10
    assert kinds.count("tanh") == 5
    assert kinds.count("barrier") == 5
    with_benchmarks = synth_manifest(42, benchmarks=True)
    assert len(with_benchmarks.problems) == len(manifest.problems) + len(BENCHMARKS)
    assert with_benchmarks.problems[:len(manifest.problems)] == manifest.problems


def test_synth_suite_is_deterministic():
    first = synth_suite(7)
    second = synth_suite(7)
    assert [p.name for p in first] == [p.name for p in second]
    for a, b in zip(first, second):
        np.testing.assert_array_equal(a.x0, b.x0)
        assert a.oracle.value(a.x0) == b.oracle.value(b.x0)


def test_benchmark_entries_expand_per_start():
    entry = ProblemSpec(name="cube", kind="benchmark", seed=3, n=10, params={"function": "cube", "starts": 3})
    problems = build_problem(entry)
    assert [p.name for p in problems] == ["cube-s0", "cube-s1", "cube-s2"]
    np.testing.assert_array_equal(problems[0].x0, benchmark_start("cube", 10))
    assert not np.array_equal(problems[1].x0, problems[2].x0)


def test_build_problem_unknown_kind():
    with pytest.raises(UnknownFunction):
        build_problem(ProblemSpec(name="x", kind="mystery", n=3))


def test_libsvm_entry_in_manifest(tmp_path):
    path = tmp_path / "toy.libsvm"
    path.write_text("1 1:0.5 3:2\n-1 2:1\n1 1:1 2:1\n")
    entry = ProblemSpec(name="toy", kind="logistic", n=3, params={"path": str(path)})
    (problem,) = build_problem(entry)
    assert problem.oracle.dim == 3
    assert problem.oracle.value(problem.x0) == pytest.approx(np.log(2.0))


def test_manifest_round_trip(tmp_path):
    manifest = synth_manifest(3)
    path = write_manifest(manifest, tmp_path / "suite" / "manifest.json")
    loaded = load_manifest(path)
    assert isinstance(loaded, SuiteManifest)
    assert loaded == manifest


def test_suite_passes_derivative_gate(rng):
    results = check_suite(synth_suite(42, benchmarks=True), rng)
    failed = [r.name for r in results if not r.passed]
    assert failed == []
