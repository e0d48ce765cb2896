"""Numerically stable logistic loss, probabilities, and exact gradients.

The loss is the mean cross-entropy over samples; the L1 penalty enters the
reported objective but never the gradient (the nonsmooth term is handled by
the projection / proximal machinery downstream).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .dataset import SparseDataset

__all__ = [
    "ModelParams",
    "LossGrad",
    "sigmoid",
    "predict_proba",
    "margins",
    "loss_from_margins",
    "loss_and_grad",
    "save_model",
    "load_model",
]

MODEL_FORMAT = "projlogit-model"


@dataclass(frozen=True)
class ModelParams:
    """Weight vector and intercept of a linear logistic model."""

    w: np.ndarray
    b: float

    def __post_init__(self):
        w = np.array(self.w, dtype=np.float64)
        if w.ndim != 1:
            raise ValueError("w must be one-dimensional")
        if not (np.all(np.isfinite(w)) and np.isfinite(self.b)):
            raise ValueError("model parameters must be finite")
        w.setflags(write=False)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "b", float(self.b))

    @property
    def n_features(self) -> int:
        return self.w.shape[0]

    @classmethod
    def zeros(cls, n_features: int) -> "ModelParams":
        return cls(np.zeros(n_features), 0.0)


@dataclass(frozen=True)
class LossGrad:
    """Mean logistic loss with its exact gradient (penalty excluded)."""

    loss: float
    grad_w: np.ndarray
    grad_b: float


def sigmoid(z):
    """Overflow-free logistic function; scalar in -> float out, array -> array.

    Branches on the sign and evaluates exp only on nonpositive arguments, so
    it is total on the whole finite floating range.
    """
    arr = np.atleast_1d(np.asarray(z, dtype=np.float64))
    out = np.empty_like(arr)
    pos = arr >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-arr[pos]))
    ez = np.exp(arr[~pos])
    out[~pos] = ez / (1.0 + ez)
    if np.ndim(z) == 0:
        return float(out[0])
    return out


def margins(dataset: SparseDataset, params: ModelParams) -> np.ndarray:
    """Per-sample decision values X @ w + b."""
    _check_dims(dataset, params)
    return dataset.dot(params.w) + params.b


def predict_proba(dataset: SparseDataset, params: ModelParams) -> np.ndarray:
    """Per-sample probability of class 1."""
    return sigmoid(margins(dataset, params))


def loss_from_margins(z: np.ndarray, labels: np.ndarray) -> float:
    """Mean logistic loss from precomputed margins, without forming 0/1 probabilities.

    Uses log(1 + exp(-m)) on the signed margin m, evaluated via logaddexp so
    it stays finite for margins up to the full floating range.
    """
    m = np.where(labels == 1, z, -z)
    return float(np.mean(np.logaddexp(0.0, -m)))


def loss_and_grad(dataset: SparseDataset, params: ModelParams, lam: float):
    """Mean logistic loss, its exact gradient, and the penalized objective.

    Returns ``(LossGrad, objective)`` where objective = loss + lam * ||w||_1.
    The gradient excludes the L1 term by construction.
    """
    if lam < 0:
        raise ValueError("lambda must be nonnegative")
    z = margins(dataset, params)
    p = sigmoid(z)
    resid = p - dataset.labels
    grad_w = dataset.transpose_dot(resid) / dataset.n_samples
    grad_b = float(resid.mean())
    loss = loss_from_margins(z, dataset.labels)
    objective = loss + lam * float(np.abs(params.w).sum())
    return LossGrad(loss, grad_w, grad_b), objective


def _check_dims(dataset: SparseDataset, params: ModelParams):
    if params.n_features != dataset.n_features:
        raise ValueError(
            f"model has {params.n_features} features, dataset has {dataset.n_features}"
        )


def save_model(path, params: ModelParams, lam: float, solver_meta: dict | None = None):
    """Write a model as JSON; floats use shortest round-trip decimal encoding."""
    doc = {
        "format": MODEL_FORMAT,
        "n_features": params.n_features,
        "w": params.w.tolist(),
        "b": params.b,
        "lambda": float(lam),
        "solver": solver_meta or {},
    }
    with open(path, "w", encoding="utf-8") as f:
        json.dump(doc, f, indent=1)
        f.write("\n")


def load_model(path):
    """Read a model written by :func:`save_model`.

    Returns ``(params, lam, solver_meta)``; the float round trip is bit-exact.
    """
    with open(path, "r", encoding="utf-8") as f:
        doc = json.load(f)
    if doc.get("format") != MODEL_FORMAT:
        raise ValueError(f"{path}: not a {MODEL_FORMAT} file")
    w = np.asarray(doc["w"], dtype=np.float64)
    if w.shape != (int(doc["n_features"]),):
        raise ValueError(f"{path}: weight length disagrees with n_features")
    return ModelParams(w, float(doc["b"])), float(doc["lambda"]), doc.get("solver", {})
