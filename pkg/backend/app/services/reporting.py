"""
결과 파일 입출력과 DB 저장.

출력 디렉터리 구성:
  traces/<문제>__<솔버>.csv, .json   실행별 스텝 기록과 요약
  costs_<eps>.csv                    비용 행렬 (행 = 문제, 열 = 솔버, 미해결은 "inf")
  costs.csv                          가장 작은 eps의 비용 행렬
  profile_<eps>.csv, .svg            성능 프로파일 곡선
  run_manifest.json                  시드, 설정, 문제 목록, 제외된 문제
"""

import csv
import json
import logging
import math
import re
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .. import models  # noqa: E402
from .bench import CostMatrix, performance_profile  # noqa: E402
from .errors import EmptyInput, ParseError  # noqa: E402
from .solvers import CSV_FIELDS  # noqa: E402

logger = logging.getLogger(__name__)


def eps_label(eps):
    return f"{eps:g}"


def _safe_name(name):
    return re.sub(r"[^A-Za-z0-9_.+-]", "_", name)


def _format_cost(value):
    return "inf" if not math.isfinite(value) else repr(float(value))


def write_trace(trace, directory, solver_name):
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    stem = f"{_safe_name(trace.problem)}__{_safe_name(solver_name)}"
    with open(directory / f"{stem}.csv", "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(CSV_FIELDS)
        for record in trace.records:
            writer.writerow(record.as_row())
    (directory / f"{stem}.json").write_text(json.dumps({"solver": solver_name, **trace.summary()}, indent=2))
    return directory / f"{stem}.csv"


def write_costs_csv(matrix, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["problem", *matrix.solvers])
        for name, row in zip(matrix.problems, matrix.t):
            writer.writerow([name, *(_format_cost(v) for v in row)])
    return path


def read_costs_csv(path):
    with open(path, "r", newline="") as f:
        rows = list(csv.reader(f))
    if not rows or len(rows[0]) < 2:
        raise EmptyInput(f"{path}: no solver columns")
    solvers = rows[0][1:]
    problems, table = [], []
    for line_number, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != len(solvers) + 1:
            raise ParseError(f"expected {len(solvers) + 1} fields, found {len(row)}", line_number)
        try:
            table.append([float(v) for v in row[1:]])
        except ValueError:
            raise ParseError(f"bad cost value in {row[1:]}", line_number)
        problems.append(row[0])
    return CostMatrix(solvers, problems, np.array(table).reshape(len(problems), len(solvers)))


def write_profile_csv(curves, path):
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["solver", "r", "rho"])
        for curve in curves:
            for r, rho in zip(curve.breakpoints, curve.values):
                writer.writerow([curve.solver, repr(float(r)), repr(float(rho))])
    return path


def plot_profiles(curves, path, title=None):
    """솔버마다 계단형 선 하나. x축은 log2 스케일의 성능 비율 r."""
    r_max = max([float(c.breakpoints[-1]) for c in curves] + [2.0]) * 1.1
    fig, ax = plt.subplots(figsize=(6, 4))
    for curve in curves:
        xs = np.concatenate([[1.0], curve.breakpoints, [r_max]])
        ys = np.concatenate([[curve(1.0)], curve.values, [curve.values[-1]]])
        ax.step(xs, ys, where="post", label=curve.solver)
    ax.set_xscale("log", base=2)
    ax.set_xlim(1.0, r_max)
    ax.set_ylim(0.0, 1.02)
    ax.set_xlabel("r")
    ax.set_ylabel("rho(r)")
    if title:
        ax.set_title(title)
    ax.legend(loc="lower right")
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)
    return path


def write_profile(matrix, out_dir, label):
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    curves = performance_profile(matrix)
    write_profile_csv(curves, out_dir / f"profile_{label}.csv")
    plot_profiles(curves, out_dir / f"profile_{label}.svg", title=f"eps = {label}")
    return curves


def grid_manifest(result, seed, manifest=None):
    return {
        "seed": seed,
        "metric": result.metric.value,
        "eps": result.eps_list,
        "solvers": {name: cfg.model_dump(mode="json") for name, cfg in result.solvers.items()},
        "suite": manifest.model_dump(mode="json") if manifest is not None else None,
        "problems": result.problems,
        "f_best": {p: (v if math.isfinite(v) else None) for p, v in result.f_best.items()},
        "dropped": result.dropped,
        "failures": [{"problem": p, "solver": s, "error": e} for (p, s), e in result.failures.items()],
    }


def write_grid(result, out_dir, seed, manifest=None):
    """그리드 결과 전체를 out_dir에 씁니다."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for (problem, solver), trace in result.traces.items():
        if trace is not None:
            write_trace(trace, out_dir / "traces", solver)
    for eps, matrix in result.costs.items():
        label = eps_label(eps)
        write_costs_csv(matrix, out_dir / f"costs_{label}.csv")
        if matrix.problems:
            write_profile(matrix, out_dir, label)
        else:
            logger.warning("eps=%s: no problems left, skipping profile", label)
    write_costs_csv(result.costs[min(result.costs)], out_dir / "costs.csv")
    (out_dir / "run_manifest.json").write_text(json.dumps(grid_manifest(result, seed, manifest), indent=2))
    logger.info("wrote grid results to %s", out_dir)
    return out_dir


def save_grid(db, result, seed, manifest=None):
    """그리드 결과를 DB에 저장하고 BenchRun을 돌려줍니다."""
    run = models.BenchRun(
        seed=seed,
        metric=result.metric.value,
        eps_list=json.dumps(result.eps_list),
        solver_configs=json.dumps({n: c.model_dump(mode="json") for n, c in result.solvers.items()}),
        suite_manifest=manifest.model_dump_json() if manifest is not None else None,
        dropped=json.dumps(result.dropped),
    )
    db.add(run)
    db.flush()
    for (problem, solver), trace in result.traces.items():
        if trace is None:
            db.add(models.RunRecord(bench_id=run.id, problem=problem, solver=solver, termination="Error",
                                    steps=0, f_final=None, gnorm_final=None, wall_time=0.0, counters="{}"))
            continue
        db.add(models.RunRecord(
            bench_id=run.id,
            problem=problem,
            solver=solver,
            termination=trace.termination.value,
            steps=trace.steps,
            f_final=trace.f_final if math.isfinite(trace.f_final) else None,
            gnorm_final=trace.gnorm_final if math.isfinite(trace.gnorm_final) else None,
            wall_time=trace.wall_time,
            counters=json.dumps(trace.counters.as_dict()),
        ))
    for eps, matrix in result.costs.items():
        for problem, row in zip(matrix.problems, matrix.t):
            for solver, cost in zip(matrix.solvers, row):
                db.add(models.CostEntry(bench_id=run.id, eps=eps, problem=problem, solver=solver,
                                        cost=float(cost) if math.isfinite(cost) else None))
    db.commit()
    db.refresh(run)
    return run


def load_cost_matrix(db, bench_id, eps):
    """저장된 비용을 CostMatrix로 복원합니다. 행/열 순서는 저장 순서를 따릅니다."""
    entries = (db.query(models.CostEntry)
               .filter(models.CostEntry.bench_id == bench_id, models.CostEntry.eps == eps)
               .order_by(models.CostEntry.id)
               .all())
    problems, solvers = [], []
    for entry in entries:
        if entry.problem not in problems:
            problems.append(entry.problem)
        if entry.solver not in solvers:
            solvers.append(entry.solver)
    table = np.full((len(problems), len(solvers)), math.inf)
    for entry in entries:
        if entry.cost is not None:
            table[problems.index(entry.problem), solvers.index(entry.solver)] = entry.cost
    return CostMatrix(solvers, problems, table)
