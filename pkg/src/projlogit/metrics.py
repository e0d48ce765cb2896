"""Classification evaluation: accuracy, ROC curve, AUROC, sparsity statistics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import SparseDataset
from .model import ModelParams, predict_proba

__all__ = [
    "EvalReport",
    "accuracy",
    "roc_curve",
    "auroc",
    "sparsity_stats",
    "evaluate",
]


@dataclass(frozen=True)
class EvalReport:
    """Evaluation of a fitted model on a labeled dataset."""

    accuracy: float
    roc_points: list[tuple[float, float]]
    auroc: float
    l1_norm: float
    nnz: int
    threshold: float = 0.5

    def to_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "auroc": self.auroc,
            "l1_norm": self.l1_norm,
            "nnz": self.nnz,
            "threshold": self.threshold,
            "roc_points": [[f, t] for f, t in self.roc_points],
        }


def accuracy(probs, labels, threshold: float = 0.5) -> float:
    """Fraction of samples where (prob >= threshold) matches the label.

    Ties at the threshold predict class 1.
    """
    probs = np.asarray(probs, dtype=np.float64)
    labels = np.asarray(labels)
    if probs.shape != labels.shape:
        raise ValueError("probs and labels must have equal length")
    if probs.size == 0:
        raise ValueError("empty input")
    predicted = (probs >= threshold).astype(np.int8)
    return float(np.mean(predicted == labels))


def roc_curve(scores, labels) -> list[tuple[float, float]]:
    """(false positive rate, true positive rate) pairs swept over all thresholds.

    Scores are sorted descending and tied scores collapse into a single sweep
    step.  The curve starts at (0, 0) and ends at (1, 1).
    """
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    if scores.shape != labels.shape:
        raise ValueError("scores and labels must have equal length")
    n_pos = int(np.sum(labels == 1))
    n_neg = int(np.sum(labels == 0))
    if n_pos == 0 or n_neg == 0:
        raise ValueError("roc_curve requires both classes to be present")
    order = np.argsort(-scores, kind="stable")
    s = scores[order]
    y = labels[order]
    tps = np.cumsum(y == 1)
    fps = np.cumsum(y == 0)
    # Index of the last element in each group of tied scores.
    group_ends = np.r_[np.flatnonzero(np.diff(s) != 0), s.size - 1]
    points = [(0.0, 0.0)]
    points.extend((float(fps[i] / n_neg), float(tps[i] / n_pos)) for i in group_ends)
    return points


def auroc(roc_points) -> float:
    """Trapezoidal area under an ROC curve produced by :func:`roc_curve`."""
    pts = np.asarray(roc_points, dtype=np.float64)
    return float(np.trapezoid(pts[:, 1], pts[:, 0]))


def sparsity_stats(w, eps: float = 0.0) -> tuple[float, int]:
    """(l1 norm of the raw weights, count of |w_j| > eps)."""
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    w = np.asarray(w, dtype=np.float64)
    return float(np.abs(w).sum()), int(np.sum(np.abs(w) > eps))


def evaluate(
    dataset: SparseDataset,
    params: ModelParams,
    threshold: float = 0.5,
    eps: float = 0.0,
) -> EvalReport:
    """Full report for a fitted model: accuracy, ROC/AUROC, sparsity."""
    probs = predict_proba(dataset, params)
    points = roc_curve(probs, dataset.labels)
    l1, nnz = sparsity_stats(params.w, eps)
    return EvalReport(
        accuracy=accuracy(probs, dataset.labels, threshold),
        roc_points=points,
        auroc=auroc(points),
        l1_norm=l1,
        nnz=nnz,
        threshold=threshold,
    )
