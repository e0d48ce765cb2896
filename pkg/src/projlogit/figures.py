"""Matplotlib renderings of the report CSVs: traces, sparsity path, heatmap, ROC."""

from __future__ import annotations

from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .metrics import EvalReport
from .path import PathResult
from .projection_solver import TracePoint

__all__ = [
    "save_trace_figure",
    "save_trajectory_figure",
    "save_sparsity_figure",
    "save_heatmap_figure",
    "save_roc_figure",
]

_DPI = 150
# Trajectory panels plot at most this many weight components.
_MAX_TRAJECTORIES = 64


def save_trace_figure(traces: Mapping[str, Sequence[TracePoint]], path):
    """Objective value against iteration, one curve per labeled trace."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for label, trace in traces.items():
        ax.plot([p.iteration for p in trace], [p.objective for p in trace], label=label)
    ax.set_xlabel("iteration")
    ax.set_ylabel("objective")
    ax.grid(True, alpha=0.3)
    if len(traces) > 1:
        ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def save_trajectory_figure(traces: Mapping[str, Sequence[TracePoint]], path):
    """Weight-component trajectories, one panel per labeled trace.

    For wide models only the components largest in magnitude at the end are
    drawn, so the panels stay readable.
    """
    n_panels = max(len(traces), 1)
    fig, axes = plt.subplots(1, n_panels, figsize=(4.5 * n_panels, 4), squeeze=False)
    for ax, (label, trace) in zip(axes[0], traces.items()):
        iters = [p.iteration for p in trace]
        weights = np.array([p.params.w for p in trace])
        cols = np.argsort(-np.abs(weights[-1]))[:_MAX_TRAJECTORIES]
        for j in sorted(cols):
            ax.plot(iters, weights[:, j], linewidth=0.8)
        ax.set_title(label)
        ax.set_xlabel("iteration")
        ax.grid(True, alpha=0.3)
    axes[0][0].set_ylabel("weight value")
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def save_sparsity_figure(result: PathResult, path):
    """L1 norm of the solution against lambda (log horizontal axis)."""
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(result.lambdas, [rec.l1_norm for rec in result.records], marker="o")
    ax.set_xscale("log")
    ax.set_xlabel("lambda")
    ax.set_ylabel("l1 norm of weights")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def save_heatmap_figure(result: PathResult, path):
    """Weight heatmap: one row per lambda (descending top to bottom)."""
    weights = np.array([rec.params.w for rec in result.records])
    fig, ax = plt.subplots(figsize=(7, 4))
    vmax = float(np.abs(weights).max()) or 1.0
    im = ax.imshow(weights, aspect="auto", cmap="viridis", vmin=-vmax, vmax=vmax)
    ax.set_xlabel("weight index")
    ax.set_ylabel("lambda (descending)")
    ax.set_yticks(range(len(result.records)))
    ax.set_yticklabels(f"{rec.lam:.3g}" for rec in result.records)
    fig.colorbar(im, ax=ax, label="weight value")
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def save_roc_figure(report: EvalReport, path):
    """ROC curve with the chance diagonal and the AUROC in the title."""
    pts = np.asarray(report.roc_points)
    fig, ax = plt.subplots(figsize=(5, 5))
    ax.plot(pts[:, 0], pts[:, 1])
    ax.plot([0, 1], [0, 1], linestyle="--", color="gray", linewidth=0.8)
    ax.set_xlabel("false positive rate")
    ax.set_ylabel("true positive rate")
    ax.set_title(f"AUROC = {report.auroc:.3f}")
    ax.set_xlim(-0.02, 1.02)
    ax.set_ylim(-0.02, 1.02)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
