"""Command-line surface: train, predict, eval, path, bench, and trace.

Every command writes its artifacts plus a ``manifest.json`` run record into
the output directory.  Wall time in the manifest covers the solve only; the
total including parsing is recorded separately.  Exit codes: 0 success,
2 input error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from dataclasses import asdict
from pathlib import Path

from . import __version__
from .dataset import DatasetError, load_libsvm, read_manifest
from .metrics import accuracy, evaluate
from .model import load_model, predict_proba, save_model
from .oracle import ista_solve
from .path import SweepError, lambda_grid, sweep, write_heatmap_csv, write_sparsity_csv
from .projection_solver import (
    INIT_MODES,
    DivergenceError,
    SolverConfig,
    solve,
    write_trace_csv,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERIC = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="projlogit",
        description="L1-regularized logistic regression via discretized projection dynamics",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="fit a model on a LIBSVM file")
    p.add_argument("train", help="LIBSVM training file")
    _add_solver_flags(p, lam_required=True)
    p.add_argument("--trace", action="store_true", help="record and export the iterate trace")
    p.add_argument("--full-trace", action="store_true", help="include weight columns in the trace CSV")
    _add_out_flags(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="per-sample class-1 probabilities")
    p.add_argument("model", help="model JSON written by train")
    p.add_argument("data", help="LIBSVM file to score")
    _add_out_flags(p)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("eval", help="accuracy / ROC / AUROC of a model on a test split")
    p.add_argument("model", help="model JSON written by train")
    p.add_argument("test", help="LIBSVM test file")
    p.add_argument("--eps-zero", type=float, default=0.0, help="zero threshold for the nnz statistic")
    _add_out_flags(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("path", help="regularization path over a log-spaced lambda grid")
    p.add_argument("train", help="LIBSVM training file")
    p.add_argument("test", nargs="?", default=None, help="optional LIBSVM test file")
    p.add_argument("--points", type=int, default=20, help="grid size (default 20)")
    p.add_argument("--min-ratio", type=float, default=0.01, help="smallest lambda as a fraction of lambda_max")
    p.add_argument("--parallel", action="store_true", help="solve all lambdas concurrently, cold-start")
    p.add_argument("--eps-zero", type=float, default=None, help="zero threshold for nnz (default 10*tol)")
    _add_solver_flags(p, lam_required=False, with_lambda=False)
    _add_out_flags(p)
    p.set_defaults(func=cmd_path)

    p = sub.add_parser("bench", help="timed solves over a datasets.toml manifest")
    p.add_argument("manifest", help="TOML manifest listing datasets and lambdas")
    p.add_argument("--verify", action="store_true", help="also run the ISTA oracle and report objective gaps")
    _add_solver_flags(p, lam_required=False, with_lambda=False)
    _add_out_flags(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("trace", help="per-initialization convergence traces")
    p.add_argument("train", help="LIBSVM training file")
    p.add_argument("--inits", default="zeros,ones,random", help="comma-separated init names")
    _add_solver_flags(p, lam_required=True)
    p.add_argument("--full-trace", action="store_true", help="include weight columns in trace CSVs")
    _add_out_flags(p)
    p.set_defaults(func=cmd_trace)
    return parser


def _add_solver_flags(p: argparse.ArgumentParser, lam_required: bool, with_lambda: bool = True):
    if with_lambda:
        p.add_argument("--lambda", dest="lam", type=float, required=lam_required,
                       help="L1 penalty strength (mean-loss scale)")
    p.add_argument("--alpha-step", type=float, default=None,
                   help="step size (default: 1/curvature surrogate)")
    p.add_argument("--tol", type=float, default=1e-6, help="stopping tolerance on ||rhs||_inf")
    p.add_argument("--max-iters", type=int, default=100_000)
    p.add_argument("--init", choices=INIT_MODES, default="zeros")
    p.add_argument("--seed", type=int, default=0, help="seed for random initialization")
    p.add_argument("--no-line-search", action="store_true")
    p.add_argument("--trace-stride", type=int, default=1)


def _add_out_flags(p: argparse.ArgumentParser):
    p.add_argument("--out", default=".", help="output directory (created if missing)")
    p.add_argument("--no-figures", action="store_true", help="skip PNG rendering next to the CSVs")


def _solver_config(args, record_trace: bool = False) -> SolverConfig:
    return SolverConfig(
        alpha_step=args.alpha_step,
        tol=args.tol,
        max_iters=args.max_iters,
        init=args.init,
        seed=args.seed,
        line_search=not args.no_line_search,
        record_trace=record_trace,
        trace_stride=args.trace_stride,
    )


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_manifest(out: Path, command: str, dataset_paths: dict, lam, config,
                    seed, solve_seconds: float, total_seconds: float,
                    outputs: list[str], extra: dict | None = None):
    doc = {
        "command": command,
        "version": __version__,
        "dataset_paths": dataset_paths,
        "lambda": lam,
        "config": asdict(config) if config is not None else None,
        "seed": seed,
        "wall_time_seconds": solve_seconds,
        "total_seconds": total_seconds,
        "outputs": outputs,
    }
    if extra:
        doc.update(extra)
    with open(out / "manifest.json", "w", encoding="utf-8") as f:
        json.dump(doc, f, indent=1)
        f.write("\n")


def cmd_train(args) -> int:
    t_total = time.perf_counter()
    ds = load_libsvm(args.train)
    config = _solver_config(args, record_trace=args.trace)
    t0 = time.perf_counter()
    result = solve(ds, args.lam, config)
    solve_s = time.perf_counter() - t0
    out = _out_dir(args)
    meta = {"version": __version__, "config": asdict(config)}
    meta.update(result.summary())
    save_model(out / "model.json", result.params, args.lam, meta)
    outputs = ["model.json"]
    if args.trace:
        with open(out / "trace.csv", "w", newline="", encoding="utf-8") as f:
            write_trace_csv(result.trace, f, full=args.full_trace)
        outputs.append("trace.csv")
        if not args.no_figures:
            from .figures import save_trace_figure

            save_trace_figure({"train": result.trace}, out / "trace.png")
            outputs.append("trace.png")
    print(f"objective {result.objective!r}")
    print(f"iterations {result.iterations}")
    print(f"kkt_residual {result.kkt_residual:.3e}")
    print(f"terminated {result.terminated}")
    print(f"wall_time_seconds {solve_s:.3f}")
    _write_manifest(out, "train", {"train": str(args.train)}, args.lam, config,
                    args.seed, solve_s, time.perf_counter() - t_total, outputs)
    return EXIT_OK


def cmd_predict(args) -> int:
    t_total = time.perf_counter()
    params, lam, _ = load_model(args.model)
    ds = load_libsvm(args.data, n_features_hint=params.n_features)
    if ds.n_features != params.n_features:
        raise DatasetError(
            f"data has {ds.n_features} features, model has {params.n_features}"
        )
    t0 = time.perf_counter()
    probs = predict_proba(ds, params)
    solve_s = time.perf_counter() - t0
    out = _out_dir(args)
    with open(out / "predictions.csv", "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["index", "probability"])
        for i, prob in enumerate(probs):
            writer.writerow([i, repr(float(prob))])
    print(f"samples {ds.n_samples}")
    _write_manifest(out, "predict", {"model": str(args.model), "data": str(args.data)},
                    lam, None, None, solve_s, time.perf_counter() - t_total,
                    ["predictions.csv"])
    return EXIT_OK


def cmd_eval(args) -> int:
    t_total = time.perf_counter()
    params, lam, _ = load_model(args.model)
    test = load_libsvm(args.test, n_features_hint=params.n_features)
    if test.n_features != params.n_features:
        raise DatasetError(
            f"test set has {test.n_features} features, model has {params.n_features}"
        )
    t0 = time.perf_counter()
    report = evaluate(test, params, eps=args.eps_zero)
    solve_s = time.perf_counter() - t0
    out = _out_dir(args)
    with open(out / "eval.json", "w", encoding="utf-8") as f:
        json.dump(report.to_dict(), f, indent=1)
        f.write("\n")
    with open(out / "roc.csv", "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["fpr", "tpr"])
        for fpr, tpr in report.roc_points:
            writer.writerow([repr(fpr), repr(tpr)])
    outputs = ["eval.json", "roc.csv"]
    if not args.no_figures:
        from .figures import save_roc_figure

        save_roc_figure(report, out / "roc.png")
        outputs.append("roc.png")
    print(f"accuracy {100.0 * report.accuracy:.2f}%")
    print(f"auroc {report.auroc:.3f}")
    print(f"l1_norm {report.l1_norm!r}")
    print(f"nnz {report.nnz}")
    _write_manifest(out, "eval", {"model": str(args.model), "test": str(args.test)},
                    lam, None, None, solve_s, time.perf_counter() - t_total, outputs,
                    extra={"eps_zero": args.eps_zero})
    return EXIT_OK


def cmd_path(args) -> int:
    t_total = time.perf_counter()
    train = load_libsvm(args.train)
    test = load_libsvm(args.test, n_features_hint=train.n_features) if args.test else None
    config = _solver_config(args)
    grid = lambda_grid(train, args.points, args.min_ratio)
    t0 = time.perf_counter()
    result = sweep(train, test, grid, config, parallel=args.parallel, eps_zero=args.eps_zero)
    solve_s = time.perf_counter() - t0
    out = _out_dir(args)
    with open(out / "sparsity.csv", "w", newline="", encoding="utf-8") as f:
        write_sparsity_csv(result, f)
    with open(out / "heatmap.csv", "w", newline="", encoding="utf-8") as f:
        write_heatmap_csv(result, f)
    outputs = ["sparsity.csv", "heatmap.csv"]
    if not args.no_figures:
        from .figures import save_heatmap_figure, save_sparsity_figure

        save_sparsity_figure(result, out / "sparsity.png")
        save_heatmap_figure(result, out / "heatmap.png")
        outputs.extend(["sparsity.png", "heatmap.png"])
    for rec in result.records:
        acc = "" if rec.accuracy is None else f" accuracy={100 * rec.accuracy:.2f}%"
        print(f"lambda {rec.lam:.6g}: l1={rec.l1_norm:.6g} nnz={rec.nnz}"
              f" iterations={rec.iterations}{acc}")
    paths = {"train": str(args.train)}
    if args.test:
        paths["test"] = str(args.test)
    _write_manifest(out, "path", paths, None, config, args.seed, solve_s,
                    time.perf_counter() - t_total, outputs,
                    extra={"points": args.points, "min_ratio": args.min_ratio,
                           "parallel": args.parallel, "eps_zero": result.eps_zero})
    return EXIT_OK


def cmd_bench(args) -> int:
    t_total = time.perf_counter()
    entries = read_manifest(args.manifest)
    config = _solver_config(args)
    fields = ["dataset", "lambda", "n_features", "n_train", "n_test",
              "wall_time_seconds", "iterations", "terminated", "objective",
              "accuracy", "oracle_gap", "error"]
    rows = []
    solve_total = 0.0
    for entry in entries:
        row = dict.fromkeys(fields, "")
        row["dataset"] = entry.name
        row["lambda"] = repr(entry.lam)
        try:
            hint = entry.info.n_features if entry.info else None
            train = load_libsvm(entry.train_path, n_features_hint=hint)
            test = load_libsvm(entry.test_path, n_features_hint=train.n_features)
            if entry.info is not None:
                expected = (entry.info.n_features, entry.info.n_train, entry.info.n_test)
                got = (train.n_features, train.n_samples, test.n_samples)
                if expected != got:
                    raise DatasetError(
                        f"{entry.name}: expected dims {expected}, got {got}"
                    )
            row["n_features"] = train.n_features
            row["n_train"] = train.n_samples
            row["n_test"] = test.n_samples
            t0 = time.perf_counter()
            result = solve(train, entry.lam, config)
            wall = time.perf_counter() - t0
            solve_total += wall
            row["wall_time_seconds"] = f"{wall:.4f}"
            row["iterations"] = result.iterations
            row["terminated"] = result.terminated
            row["objective"] = repr(result.objective)
            acc = accuracy(predict_proba(test, result.params), test.labels)
            row["accuracy"] = f"{100.0 * acc:.2f}"
            if args.verify:
                oracle = ista_solve(train, entry.lam, tol=config.tol,
                                    max_iters=config.max_iters)
                row["oracle_gap"] = repr(abs(result.objective - oracle.objective))
        except Exception as e:  # annotate and move on to the next dataset
            row["error"] = str(e)
        rows.append(row)
        status = row["error"] or (f"time={row['wall_time_seconds']}s "
                                  f"accuracy={row['accuracy']}%")
        print(f"{entry.name}: {status}")
    out = _out_dir(args)
    with open(out / "bench.csv", "w", newline="", encoding="utf-8") as f:
        writer = csv.DictWriter(f, fieldnames=fields)
        writer.writeheader()
        writer.writerows(rows)
    _write_manifest(out, "bench", {"manifest": str(args.manifest)}, None, config,
                    args.seed, solve_total, time.perf_counter() - t_total,
                    ["bench.csv"], extra={"verify": args.verify})
    return EXIT_OK


def cmd_trace(args) -> int:
    t_total = time.perf_counter()
    inits = [name.strip() for name in args.inits.split(",") if name.strip()]
    if not inits:
        raise DatasetError("no initialization names given")
    for name in inits:
        if name not in INIT_MODES:
            raise DatasetError(f"unknown init {name!r}; choose from {INIT_MODES}")
    ds = load_libsvm(args.train)
    out = _out_dir(args)
    traces = {}
    finals = {}
    outputs = []
    solve_s = 0.0
    for name in inits:
        config = SolverConfig(
            alpha_step=args.alpha_step, tol=args.tol, max_iters=args.max_iters,
            init=name, seed=args.seed, line_search=not args.no_line_search,
            record_trace=True, trace_stride=args.trace_stride,
        )
        t0 = time.perf_counter()
        result = solve(ds, args.lam, config)
        solve_s += time.perf_counter() - t0
        traces[name] = result.trace
        finals[name] = result.objective
        fname = f"trace_{name}.csv"
        with open(out / fname, "w", newline="", encoding="utf-8") as f:
            write_trace_csv(result.trace, f, full=args.full_trace)
        outputs.append(fname)
        print(f"init {name}: objective {result.objective!r} "
              f"iterations {result.iterations} terminated {result.terminated}")
    values = list(finals.values())
    gap = max(abs(a - b) for a in values for b in values)
    print(f"max_pairwise_objective_gap {gap!r}")
    if not args.no_figures:
        from .figures import save_trace_figure, save_trajectory_figure

        save_trace_figure(traces, out / "trace.png")
        save_trajectory_figure(traces, out / "trajectories.png")
        outputs.extend(["trace.png", "trajectories.png"])
    _write_manifest(out, "trace", {"train": str(args.train)}, args.lam,
                    _solver_config(args, record_trace=True), args.seed, solve_s,
                    time.perf_counter() - t_total, outputs, extra={"inits": inits})
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SweepError as e:
        kind = EXIT_NUMERIC if isinstance(e.__cause__, ArithmeticError) else EXIT_INPUT
        print(f"error: {e}", file=sys.stderr)
        return kind
    except ArithmeticError as e:  # DivergenceError and friends
        print(f"numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except (DatasetError, ValueError, OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


def entry():  # console-script shim
    sys.exit(main())


if __name__ == "__main__":
    entry()
