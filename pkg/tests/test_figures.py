"""Smoke tests: every figure function renders a nonempty PNG."""

from projlogit.figures import (
    save_heatmap_figure,
    save_roc_figure,
    save_sparsity_figure,
    save_trace_figure,
    save_trajectory_figure,
)
from projlogit.metrics import evaluate
from projlogit.path import lambda_grid, sweep
from projlogit.projection_solver import SolverConfig, solve

from conftest import random_dataset


def test_trace_figures(tmp_path):
    ds = random_dataset(70, n=40, d=5)
    traces = {}
    for init in ("zeros", "ones"):
        res = solve(ds, 0.02, SolverConfig(tol=1e-7, init=init, record_trace=True))
        traces[init] = res.trace
    out = tmp_path / "trace.png"
    save_trace_figure(traces, out)
    assert out.stat().st_size > 0
    out = tmp_path / "trajectories.png"
    save_trajectory_figure(traces, out)
    assert out.stat().st_size > 0


def test_path_figures(tmp_path):
    ds = random_dataset(71, n=60, d=6)
    result = sweep(ds, None, lambda_grid(ds, 4, 0.05), SolverConfig(tol=1e-7))
    sparsity = tmp_path / "sparsity.png"
    heatmap = tmp_path / "heatmap.png"
    save_sparsity_figure(result, sparsity)
    save_heatmap_figure(result, heatmap)
    assert sparsity.stat().st_size > 0
    assert heatmap.stat().st_size > 0


def test_roc_figure(tmp_path):
    ds = random_dataset(72, n=50, d=5)
    res = solve(ds, 0.01, SolverConfig(tol=1e-7))
    report = evaluate(ds, res.params)
    out = tmp_path / "roc.png"
    save_roc_figure(report, out)
    assert out.stat().st_size > 0
