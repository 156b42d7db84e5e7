import csv
import json
import math

import numpy as np
import pytest

from app import models
from app.schemas import Method, SolverConfig
from app.services.bench import CostMatrix, run_grid
from app.services.errors import EmptyInput, ParseError
from app.services.problems import SuiteProblem, random_quadratic
from app.services.reporting import (
    eps_label,
    load_cost_matrix,
    read_costs_csv,
    save_grid,
    write_costs_csv,
    write_grid,
    write_profile,
    write_trace,
)
from app.services.solvers import CSV_FIELDS, solve


@pytest.fixture
def small_grid(rng):
    suite = []
    for i, n in enumerate([4, 8]):
        oracle = random_quadratic(rng, n, 1e2, name=f"quad/{i}")
        suite.append(SuiteProblem(oracle.name, oracle, rng.standard_normal(n)))
    solvers = {
        "BFGS": SolverConfig(method=Method.BFGS),
        "GD": SolverConfig(method=Method.GRADIENT_DESCENT, max_steps=10),
    }
    return run_grid(suite, solvers, [1e-2, 1e-6])


def test_eps_label():
    assert eps_label(1e-2) == "0.01"
    assert eps_label(1e-6) == "1e-06"


def test_costs_csv_round_trip_keeps_unsolved(tmp_path):
    matrix = CostMatrix(["A", "B"], ["p1", "p2"], [[3.0, math.inf], [1.5, 2.0]])
    path = write_costs_csv(matrix, tmp_path / "costs.csv")
    with open(path) as f:
        rows = list(csv.reader(f))
    assert rows[0] == ["problem", "A", "B"]
    assert rows[1][2] == "inf"
    loaded = read_costs_csv(path)
    assert loaded.solvers == ["A", "B"]
    assert loaded.problems == ["p1", "p2"]
    np.testing.assert_array_equal(loaded.t, matrix.t)


def test_read_costs_csv_errors(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    with pytest.raises(EmptyInput):
        read_costs_csv(empty)
    ragged = tmp_path / "ragged.csv"
    ragged.write_text("problem,A,B\np1,1.0\n")
    with pytest.raises(ParseError) as exc:
        read_costs_csv(ragged)
    assert exc.value.line_number == 2
    bad = tmp_path / "bad.csv"
    bad.write_text("problem,A\np1,fast\n")
    with pytest.raises(ParseError):
        read_costs_csv(bad)


def test_write_trace(tmp_path, rng):
    oracle = random_quadratic(rng, 5, 10.0, name="quad 5")
    trace = solve(oracle, rng.standard_normal(5), SolverConfig())
    path = write_trace(trace, tmp_path, "B-BFGS")
    assert path.name == "quad_5__B-BFGS.csv"
    with open(path) as f:
        rows = list(csv.reader(f))
    assert tuple(rows[0]) == CSV_FIELDS
    assert len(rows) == trace.steps + 1
    summary = json.loads(path.with_suffix(".json").read_text())
    assert summary["solver"] == "B-BFGS"
    assert summary["steps"] == trace.steps
    assert summary["termination"] == "GradTol"


def test_write_profile_files(tmp_path):
    matrix = CostMatrix(["A", "B"], ["p1", "p2"], [[2.0, 1.0], [4.0, 8.0]])
    curves = write_profile(matrix, tmp_path, "0.01")
    assert len(curves) == 2
    with open(tmp_path / "profile_0.01.csv") as f:
        rows = list(csv.reader(f))
    assert rows[0] == ["solver", "r", "rho"]
    assert ["A", "1.0", "0.5"] in rows
    assert (tmp_path / "profile_0.01.svg").read_text().lstrip().startswith("<?xml")


def test_write_grid_layout(tmp_path, small_grid):
    write_grid(small_grid, tmp_path, seed=42)
    for name in ("costs.csv", "costs_0.01.csv", "costs_1e-06.csv", "profile_0.01.csv", "profile_0.01.svg",
                 "run_manifest.json"):
        assert (tmp_path / name).exists(), name
    assert len(list((tmp_path / "traces").glob("*.csv"))) == 4
    assert (tmp_path / "costs.csv").read_text() == (tmp_path / "costs_1e-06.csv").read_text()
    manifest = json.loads((tmp_path / "run_manifest.json").read_text())
    assert manifest["seed"] == 42
    assert manifest["metric"] == "steps"
    assert list(manifest["solvers"]) == ["BFGS", "GD"]


def test_save_and_load_grid(db_session, small_grid):
    run = save_grid(db_session, small_grid, seed=7)
    assert run.id is not None
    assert db_session.query(models.RunRecord).filter_by(bench_id=run.id).count() == 4
    loaded = load_cost_matrix(db_session, run.id, 1e-6)
    original = small_grid.costs[1e-6]
    assert loaded.problems == original.problems
    assert loaded.solvers == original.solvers
    np.testing.assert_array_equal(loaded.t, original.t)
    assert json.loads(run.eps_list) == [1e-2, 1e-6]


def test_save_grid_records_failed_runs(db_session, rng):
    oracle = random_quadratic(rng, 3, 10.0, name="ok")
    bad_cfg = SolverConfig(method=Method.BFGS)
    result = run_grid([SuiteProblem("ok", oracle, np.ones(4))], {"BFGS": bad_cfg}, [1e-2])
    run = save_grid(db_session, result, seed=1)
    (record,) = db_session.query(models.RunRecord).filter_by(bench_id=run.id).all()
    assert record.termination == "Error"
    assert record.f_final is None
