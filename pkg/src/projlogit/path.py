"""Regularization-path sweeps over a descending lambda grid with warm starts."""

from __future__ import annotations

import csv
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .dataset import SparseDataset
from .metrics import accuracy
from .model import ModelParams, predict_proba
from .oracle import lambda_max
from .projection_solver import SolveResult, SolverConfig, solve

__all__ = [
    "PathRecord",
    "PathResult",
    "SweepError",
    "lambda_grid",
    "sweep",
    "worker_count",
    "write_sparsity_csv",
    "write_heatmap_csv",
]


class SweepError(RuntimeError):
    """A solve inside a sweep failed; carries the offending lambda."""

    def __init__(self, lam: float, cause: Exception):
        super().__init__(f"solve failed at lambda={lam:g}: {cause}")
        self.lam = lam


@dataclass(frozen=True)
class PathRecord:
    """Solution summary at one grid point."""

    lam: float
    params: ModelParams
    objective: float
    l1_norm: float
    nnz: int
    accuracy: float | None
    iterations: int


@dataclass(frozen=True)
class PathResult:
    """Per-lambda records along a strictly descending grid."""

    lambdas: np.ndarray
    records: list[PathRecord]
    eps_zero: float

    def __post_init__(self):
        if len(self.records) != self.lambdas.size:
            raise ValueError("record count must equal grid size")


def lambda_grid(dataset: SparseDataset, n_points: int, min_ratio: float) -> np.ndarray:
    """Log-spaced grid from lambda_max(dataset) down to min_ratio * lambda_max."""
    if n_points < 2:
        raise ValueError("n_points must be at least 2")
    if not 0.0 < min_ratio < 1.0:
        raise ValueError("min_ratio must lie in (0, 1)")
    lmax = lambda_max(dataset)
    return np.geomspace(lmax, min_ratio * lmax, n_points)


def worker_count(requested: int | None = None) -> int:
    """Worker cap for parallel sweeps; the PNN_THREADS env var bounds it."""
    cap = os.environ.get("PNN_THREADS")
    limit = int(cap) if cap else (os.cpu_count() or 1)
    if requested is not None:
        limit = min(limit, requested)
    return max(1, limit)


def sweep(
    train: SparseDataset,
    test: SparseDataset | None,
    grid,
    config: SolverConfig = SolverConfig(),
    parallel: bool = False,
    eps_zero: float | None = None,
    max_workers: int | None = None,
) -> PathResult:
    """Solve at every grid lambda, descending, warm-starting from the previous fit.

    With ``parallel`` every lambda solves cold-start concurrently instead
    (identical per-lambda configs, so results are deterministic regardless of
    completion order).  ``eps_zero`` (default 10 * tol) is the display-zeroing
    threshold used for the nnz column; stored weights stay raw.
    """
    grid = np.asarray(grid, dtype=np.float64)
    if grid.size < 1:
        raise ValueError("empty lambda grid")
    if np.any(np.diff(grid) >= 0):
        raise ValueError("lambda grid must be strictly descending")
    if np.any(grid < 0):
        raise ValueError("lambdas must be nonnegative")
    eps = 10.0 * config.tol if eps_zero is None else eps_zero

    def run(lam: float, warm: ModelParams | None) -> SolveResult:
        try:
            return solve(train, lam, config, warm_start=warm)
        except Exception as e:
            raise SweepError(lam, e) from e

    results: list[SolveResult]
    if parallel:
        with ThreadPoolExecutor(max_workers=worker_count(max_workers)) as pool:
            results = list(pool.map(lambda lam: run(lam, None), grid))
    else:
        results = []
        warm = None
        for lam in grid:
            result = run(lam, warm)
            results.append(result)
            warm = result.params

    records = []
    for lam, result in zip(grid, results):
        acc = None
        if test is not None:
            acc = accuracy(predict_proba(test, result.params), test.labels)
        l1 = float(np.abs(result.params.w).sum())
        nnz = int(np.sum(np.abs(result.params.w) > eps))
        records.append(
            PathRecord(
                lam=float(lam),
                params=result.params,
                objective=result.objective,
                l1_norm=l1,
                nnz=nnz,
                accuracy=acc,
                iterations=result.iterations,
            )
        )
    return PathResult(lambdas=grid, records=records, eps_zero=eps)


def write_sparsity_csv(result: PathResult, f):
    """CSV columns lambda,l1_norm,nnz,accuracy,iterations (descending lambda)."""
    writer = csv.writer(f)
    writer.writerow(["lambda", "l1_norm", "nnz", "accuracy", "iterations"])
    for rec in result.records:
        writer.writerow(
            [
                repr(rec.lam),
                repr(rec.l1_norm),
                rec.nnz,
                "" if rec.accuracy is None else repr(rec.accuracy),
                rec.iterations,
            ]
        )


def write_heatmap_csv(result: PathResult, f):
    """CSV columns lambda,w_0..w_{d-1}, one row per lambda, raw (unthresholded) weights."""
    writer = csv.writer(f)
    d = result.records[0].params.n_features if result.records else 0
    writer.writerow(["lambda"] + [f"w_{j}" for j in range(d)])
    for rec in result.records:
        writer.writerow([repr(rec.lam)] + [repr(float(v)) for v in rec.params.w])
