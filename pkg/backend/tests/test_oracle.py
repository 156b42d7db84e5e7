import numpy as np
import pytest

from app.services.errors import DimensionMismatch, NonFiniteValue
from app.services.oracle import (
    CountingOracle,
    FunctionOracle,
    check_gradient,
    check_hess_action,
    check_linearity,
    check_symmetry,
    derivative_report,
)
from app.services.problems import logistic_oracle, synthetic_classification, tanh_oracle
from conftest import make_quadratic_oracle, random_spd


def test_check_gradient_half_norm(half_norm):
    assert check_gradient(half_norm(2), np.array([1.0, 2.0]), h=1e-5) <= 1e-8


def test_check_gradient_quartic():
    oracle = FunctionOracle(1, lambda x: x[0] ** 4, lambda x: 4 * x ** 3,
                            hess_action=lambda x, v: 12 * x[0] ** 2 * v)
    assert check_gradient(oracle, np.array([1.0]), h=1e-4) <= 1e-6


def test_check_gradient_catches_wrong_gradient():
    oracle = FunctionOracle(2, lambda x: x @ x, lambda x: x, hessian=lambda x: np.eye(2))
    assert check_gradient(oracle, np.array([1.0, 1.0])) > 0.1


def test_check_gradient_logistic(rng):
    data = synthetic_classification(rng, 5, 4, density=0.8)
    oracle = logistic_oracle(data, np.eye(4))
    assert check_gradient(oracle, rng.standard_normal(4), h=1e-5) <= 1e-6


def test_check_hess_action_quadratic(rng):
    a = random_spd(rng, 5)
    oracle = make_quadratic_oracle(a)
    assert check_hess_action(oracle, rng.standard_normal(5), rng.standard_normal(5)) <= 1e-7


def test_check_hess_action_tanh(rng):
    data = synthetic_classification(rng, 30, 6, density=0.5)
    oracle = tanh_oracle(data)
    assert check_hess_action(oracle, 0.3 * rng.standard_normal(6), rng.standard_normal(6)) <= 1e-5


def test_check_hess_action_is_relative_for_small_curvature(rng):
    scale = 1e-6
    oracle = FunctionOracle(3, lambda x: 0.5 * scale * x @ x, lambda x: scale * x,
                            hess_action=lambda x, v: 1.1 * scale * v)
    err = check_hess_action(oracle, rng.standard_normal(3), rng.standard_normal(3))
    assert err == pytest.approx(0.1 / 1.1, rel=1e-4)


def test_hess_action_of_zero_is_zero(rng):
    data = synthetic_classification(rng, 20, 5)
    oracle = logistic_oracle(data, np.eye(5))
    x = rng.standard_normal(5)
    np.testing.assert_array_equal(oracle.hess_action(x, np.zeros(5)), np.zeros(5))
    assert check_hess_action(oracle, x, np.zeros(5)) == 0.0


def test_hess_action_block_matches_columns(rng):
    data = synthetic_classification(rng, 20, 5)
    oracle = logistic_oracle(data, np.eye(5))
    x = rng.standard_normal(5)
    v = rng.standard_normal((5, 3))
    block = oracle.hess_action(x, v)
    for j in range(3):
        np.testing.assert_allclose(block[:, j], oracle.hess_action(x, v[:, j]), rtol=1e-12, atol=1e-12)


def test_hess_action_dimension_mismatch(half_norm):
    with pytest.raises(DimensionMismatch):
        half_norm(3).hess_action(np.zeros(3), np.ones(2))


def test_symmetry_and_linearity(rng):
    data = synthetic_classification(rng, 40, 6)
    oracle = logistic_oracle(data, np.eye(6))
    x, u, v = rng.standard_normal((3, 6))
    assert check_symmetry(oracle, x, u, v) <= 1e-9
    assert check_linearity(oracle, x, u, v, 1.5, -0.5) <= 1e-10


def test_non_finite_difference_point_raises():
    oracle = FunctionOracle(1, lambda x: np.inf, lambda x: np.zeros(1), hessian=lambda x: np.eye(1))
    with pytest.raises(NonFiniteValue):
        check_gradient(oracle, np.zeros(1))


def test_counting_oracle_counts_hessian_columns(half_norm):
    counting = CountingOracle(half_norm(4))
    x = np.ones(4)
    counting.value_and_gradient(x)
    counting.gradient(x)
    counting.hess_action(x, np.ones((4, 3)))
    counting.hess_action(x, np.ones(4))
    assert counting.counters.as_dict() == {"n_f": 1, "n_grad": 2, "n_hess_action_cols": 4}


def test_derivative_report_keys(rng, half_norm):
    report = derivative_report(half_norm(3), rng.standard_normal(3), rng)
    assert set(report) == {"gradient", "hess_action", "symmetry", "linearity"}
    assert max(report.values()) <= 1e-6
