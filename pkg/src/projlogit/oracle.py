"""Independent reference machinery for validating the projection solver.

A plain proximal-gradient (ISTA) solver, the soft-thresholding prox, the
critical penalty level above which the zero weight vector is optimal, and a
central-difference gradient check.  These exist only to cross-check the
production solver; they share none of its update rule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dataset import SparseDataset
from .model import LossGrad, ModelParams, loss_and_grad, loss_from_margins, margins
from .projection_solver import DivergenceError

__all__ = [
    "OracleResult",
    "soft_threshold",
    "grad_lipschitz_bound",
    "ista_solve",
    "optimal_zero_bias",
    "lambda_max",
    "finite_diff_grad",
]


@dataclass(frozen=True)
class OracleResult:
    """Reference minimizer produced by :func:`ista_solve`."""

    params: ModelParams
    objective: float
    iterations: int


def soft_threshold(x: np.ndarray, t: float) -> np.ndarray:
    """Elementwise sign(x) * max(|x| - t, 0); the prox of t * ||.||_1."""
    if t < 0:
        raise ValueError("threshold must be nonnegative")
    return np.sign(x) * np.maximum(np.abs(x) - t, 0.0)


def grad_lipschitz_bound(dataset: SparseDataset, n_iter: int = 64, seed: int = 0) -> float:
    """Upper bound on the Lipschitz constant of the joint (w, b) loss gradient.

    Power iteration on the intercept-augmented Gram matrix estimates the top
    eigenvalue of [X 1]^T [X 1]; the bound is that value / (4 n) with a small
    safety factor for the unconverged tail of the iteration.
    """
    n = dataset.n_samples
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(dataset.n_features + 1)
    v /= np.linalg.norm(v)
    top = 0.0
    for _ in range(n_iter):
        u = dataset.dot(v[:-1]) + v[-1]
        v = np.concatenate([dataset.transpose_dot(u), [u.sum()]])
        norm = np.linalg.norm(v)
        if norm == 0.0:
            break
        top = norm
        v /= norm
    return 1.1 * top / (4.0 * n)


def ista_solve(
    dataset: SparseDataset,
    lam: float,
    step: float | None = None,
    tol: float = 1e-8,
    max_iters: int = 500_000,
) -> OracleResult:
    """Proximal-gradient (ISTA) minimizer of the penalized logistic objective.

    Iterates w <- soft_threshold(w - step * grad_w, step * lam) with a plain
    gradient step on the intercept, until the prox-gradient residual falls
    below ``tol``.  ``step`` defaults to 1 / :func:`grad_lipschitz_bound`; the
    step is halved (and kept halved) if the objective ever increases, which
    guards against an underestimated curvature bound.
    """
    if lam < 0:
        raise ValueError("lambda must be nonnegative")
    if step is not None and not step > 0:
        raise ValueError("step must be positive")
    s = step if step is not None else 1.0 / grad_lipschitz_bound(dataset)

    params = ModelParams.zeros(dataset.n_features)
    g, obj = loss_and_grad(dataset, params, lam)
    if not math.isfinite(obj):
        raise DivergenceError("non-finite objective at start")
    iterations = max_iters
    for k in range(max_iters):
        w_next = soft_threshold(params.w - s * g.grad_w, s * lam)
        b_next = params.b - s * g.grad_b
        res = max(_sup_norm(params.w - w_next) / s, abs(g.grad_b))
        if res <= tol:
            iterations = k
            break
        next_params = ModelParams(w_next, b_next)
        g_next, obj_next = loss_and_grad(dataset, next_params, lam)
        if not math.isfinite(obj_next):
            raise DivergenceError(f"non-finite objective at iteration {k}; reduce step")
        if obj_next > obj + 1e-13:
            # Reject the trial and retry from the same point with a smaller
            # step; covers an underestimated curvature bound.
            s *= 0.5
            continue
        params, g, obj = next_params, g_next, obj_next
    return OracleResult(params=params, objective=obj, iterations=iterations)


def optimal_zero_bias(dataset: SparseDataset) -> float:
    """The intercept minimizing the loss at w = 0: logit of class-1 prevalence."""
    p = dataset.class_prevalence
    if p in (0.0, 1.0):
        raise ValueError("dataset contains a single class")
    return math.log(p / (1.0 - p))


def lambda_max(dataset: SparseDataset) -> float:
    """Smallest penalty at which the all-zero weight vector is optimal.

    Computed as the sup norm of the loss gradient at w = 0 with the
    zero-weight-optimal intercept; above this value every solution has w = 0.
    """
    b_star = optimal_zero_bias(dataset)
    g, _ = loss_and_grad(dataset, ModelParams(np.zeros(dataset.n_features), b_star), 0.0)
    return _sup_norm(g.grad_w)


def finite_diff_grad(dataset: SparseDataset, params: ModelParams, h: float = 1e-6) -> LossGrad:
    """Central-difference gradient of the mean logistic loss in every coordinate.

    Differentiates the smooth loss only (no penalty term), matching what
    ``loss_and_grad`` reports.  Second-order accurate in ``h``.
    """
    if not 1e-8 <= h <= 1e-4:
        raise ValueError("h must lie in [1e-8, 1e-4]")

    def loss_at(w, b):
        return loss_from_margins(margins(dataset, ModelParams(w, b)), dataset.labels)

    grad_w = np.zeros(params.n_features)
    for j in range(params.n_features):
        w_plus = params.w.copy()
        w_minus = params.w.copy()
        w_plus[j] += h
        w_minus[j] -= h
        grad_w[j] = (loss_at(w_plus, params.b) - loss_at(w_minus, params.b)) / (2.0 * h)
    grad_b = (loss_at(params.w, params.b + h) - loss_at(params.w, params.b - h)) / (2.0 * h)
    return LossGrad(loss_at(params.w, params.b), grad_w, grad_b)


def _sup_norm(v: np.ndarray) -> float:
    return float(np.max(np.abs(v))) if v.size else 0.0
