"""
벤치마크 명령행 도구.

  python bench_cli.py run --metric steps --eps 0.2,0.1,0.01 --seed 42 --out results/run42
  python bench_cli.py profile --costs results/run42/costs_0.01.csv --out results/run42/replot
  python bench_cli.py check --seed 42
  python bench_cli.py suite --seed 42 --out suite.json
  python bench_cli.py init-db
  python bench_cli.py serve --port 8000
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from app.config import BENCH_PARALLEL, RESULTS_DIR, setup_logging
from app.schemas import SolverConfig
from app.services.bench import Metric, check_suite, run_grid
from app.services.errors import OptimizationError
from app.services.problems import load_manifest, suite_from_manifest, synth_manifest, write_manifest
from app.services.reporting import read_costs_csv, save_grid, write_grid, write_profile
from app.services.solvers import convex_presets, nonconvex_presets


def parse_eps(text):
    values = [float(v) for v in text.split(",") if v.strip()]
    if not values or any(v <= 0 for v in values):
        raise argparse.ArgumentTypeError("eps must be a comma-separated list of positive numbers")
    return values


def load_solvers(path):
    """JSON 객체 {표시 이름: SolverConfig}를 읽습니다."""
    raw = json.loads(Path(path).read_text())
    return {name: SolverConfig.model_validate(cfg) for name, cfg in raw.items()}


def resolve_manifest(args):
    if args.suite:
        return load_manifest(args.suite)
    return synth_manifest(args.seed, benchmarks=getattr(args, "benchmarks", False))


def cmd_run(args):
    manifest = resolve_manifest(args)
    suite = suite_from_manifest(manifest)
    if args.solvers:
        solvers = load_solvers(args.solvers)
    else:
        solvers = nonconvex_presets() if args.nonconvex else convex_presets()
    print(f"🚀 {len(suite)}개 문제 × {len(solvers)}개 솔버 실행 (metric={args.metric})")
    result = run_grid(suite, solvers, args.eps, metric=Metric(args.metric), parallelism=args.parallel,
                      reference=args.reference)
    out = write_grid(result, args.out, args.seed, manifest)
    print(f"✅ 결과 저장: {out}")
    for key, names in result.dropped.items():
        print(f"⚠️  제외된 문제 ({key}): {', '.join(names)}")
    if not args.no_db:
        from app.database import SessionLocal, engine
        from app.models import Base

        Base.metadata.create_all(bind=engine)
        db = SessionLocal()
        try:
            run = save_grid(db, result, args.seed, manifest)
            print(f"✅ DB 저장 완료 (bench run id={run.id})")
        finally:
            db.close()
    return 0


def cmd_profile(args):
    matrix = read_costs_csv(args.costs)
    matrix, dropped = matrix.drop_unsolved()
    if dropped:
        print(f"⚠️  모든 솔버가 풀지 못한 문제 제외: {', '.join(dropped)}")
    stem = Path(args.costs).stem
    label = stem.split("_", 1)[1] if "_" in stem else stem
    curves = write_profile(matrix, args.out, label)
    for curve in curves:
        print(f"  {curve.solver}: rho(1)={curve(1.0):.3f}, solved={curve.solved_fraction:.3f}")
    print(f"✅ 프로파일 저장: {Path(args.out) / f'profile_{label}.svg'}")
    return 0


def cmd_check(args):
    suite = suite_from_manifest(resolve_manifest(args))
    results = check_suite(suite, np.random.default_rng(args.seed))
    failed = [r for r in results if not r.passed]
    for r in results:
        mark = "✅" if r.passed else "❌"
        detail = r.error or ", ".join(f"{k}={v:.2e}" for k, v in r.report.items())
        print(f"{mark} {r.name}: {detail}")
    print(f"{len(results) - len(failed)}/{len(results)} passed")
    return 1 if failed else 0


def cmd_suite(args):
    path = write_manifest(synth_manifest(args.seed, benchmarks=args.benchmarks), args.out)
    print(f"✅ 매니페스트 저장: {path}")
    return 0


def cmd_init_db(args):
    from init_db import init_database

    return 0 if init_database() else 1


def cmd_serve(args):
    import uvicorn

    uvicorn.run("main:app", host=args.host, port=args.port)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(description="Block BFGS benchmark harness")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a solver x problem grid")
    run.add_argument("--suite", help="suite manifest JSON (default: synthetic suite for --seed)")
    run.add_argument("--solvers", help="JSON object mapping names to SolverConfig")
    run.add_argument("--nonconvex", action="store_true", help="use the non-convex preset line-up")
    run.add_argument("--benchmarks", action="store_true", help="add benchmark functions to the synthetic suite")
    run.add_argument("--metric", choices=[m.value for m in Metric], default=Metric.STEPS.value)
    run.add_argument("--eps", type=parse_eps, default=[0.2, 0.1, 0.01])
    run.add_argument("--seed", type=int, default=42)
    run.add_argument("--out", default=str(Path(RESULTS_DIR) / "latest"))
    run.add_argument("--parallel", type=int, default=BENCH_PARALLEL)
    run.add_argument("--reference", action="store_true", help="use a high-accuracy BFGS run for f_*")
    run.add_argument("--no-db", action="store_true", help="skip storing the grid in the database")
    run.set_defaults(func=cmd_run)

    profile = sub.add_parser("profile", help="recompute profiles from a costs CSV")
    profile.add_argument("--costs", required=True)
    profile.add_argument("--out", required=True)
    profile.set_defaults(func=cmd_profile)

    check = sub.add_parser("check", help="finite-difference derivative checks")
    check.add_argument("--suite")
    check.add_argument("--seed", type=int, default=42)
    check.add_argument("--benchmarks", action="store_true")
    check.set_defaults(func=cmd_check)

    suite = sub.add_parser("suite", help="write the synthetic suite manifest")
    suite.add_argument("--seed", type=int, default=42)
    suite.add_argument("--out", required=True)
    suite.add_argument("--benchmarks", action="store_true")
    suite.set_defaults(func=cmd_suite)

    init_db = sub.add_parser("init-db", help="create database tables")
    init_db.set_defaults(func=cmd_init_db)

    serve = sub.add_parser("serve", help="start the results API")
    serve.add_argument("--host", default="0.0.0.0")
    serve.add_argument("--port", type=int, default=8000)
    serve.set_defaults(func=cmd_serve)
    return parser


def main(argv=None):
    setup_logging()
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OptimizationError, ValueError, OSError) as e:
        print(f"❌ 오류: {e}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
