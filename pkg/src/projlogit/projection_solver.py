"""Box projection operator and forward-Euler integration of the projection dynamics.

The continuous system moves the weights along

    dw/dt = -grad_w L + P_box(grad_w L - w),      db/dt = -grad_b L,

where P_box clamps componentwise to [-lambda, lambda].  Its equilibria are
exactly the KKT points of the L1-penalized problem, so the integrator runs
until the right-hand side's sup norm falls below the tolerance.  The step
size fuses the system's rate constant with the Euler time step; an optional
backtracking halving keeps the penalized objective monotone.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .dataset import SparseDataset
from .model import ModelParams, loss_and_grad, loss_from_margins, sigmoid

__all__ = [
    "DivergenceError",
    "SolverConfig",
    "TracePoint",
    "SolveResult",
    "project_box",
    "dynamics_rhs",
    "kkt_residual",
    "lipschitz_surrogate",
    "default_step",
    "hard_threshold",
    "initial_params",
    "solve",
    "write_trace_csv",
]

INIT_MODES = ("zeros", "ones", "random")

# Accept a line-search trial when the objective does not grow beyond float
# noise; keeps the recorded objective sequence nonincreasing to ~1e-13.
_LS_SLACK = 1e-13
_LS_MAX_HALVINGS = 30
# Cached margins are refreshed from scratch this often to stop drift of the
# incremental z updates.
_REFRESH_EVERY = 16


class DivergenceError(ArithmeticError):
    """The iteration produced a non-finite objective (step size too large)."""


@dataclass(frozen=True)
class SolverConfig:
    """Knobs for the discretized-dynamics integrator.

    ``alpha_step`` is the fused step size; ``None`` selects
    ``1 / lipschitz_surrogate(dataset)``.  ``init`` is one of ``zeros``,
    ``ones``, or ``random`` (seeded uniform on (-1, 1)).
    """

    alpha_step: float | None = None
    tol: float = 1e-6
    max_iters: int = 100_000
    init: str = "zeros"
    seed: int = 0
    line_search: bool = True
    record_trace: bool = False
    trace_stride: int = 1

    def __post_init__(self):
        if self.alpha_step is not None and not self.alpha_step > 0:
            raise ValueError("alpha_step must be positive")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        if self.init not in INIT_MODES:
            raise ValueError(f"init must be one of {INIT_MODES}, got {self.init!r}")
        if self.trace_stride < 1:
            raise ValueError("trace_stride must be at least 1")


class TracePoint(NamedTuple):
    iteration: int
    objective: float
    kkt_residual: float
    params: ModelParams


@dataclass(frozen=True)
class SolveResult:
    """Final state of one solve.

    ``params`` is the raw iterate; ``params_sparse`` additionally snaps
    every |w_j| <= 10 * tol to exactly zero for sparsity reporting.
    """

    params: ModelParams
    iterations: int
    objective: float
    kkt_residual: float
    terminated: str  # "converged" | "max_iters"
    params_sparse: ModelParams
    trace: list[TracePoint] | None = None

    def summary(self) -> dict:
        return {
            "iterations": self.iterations,
            "objective": self.objective,
            "kkt_residual": self.kkt_residual,
            "terminated": self.terminated,
            "nnz_sparse": int(np.count_nonzero(self.params_sparse.w)),
        }


def project_box(v: np.ndarray, lam: float) -> np.ndarray:
    """Clamp every component of ``v`` to the box [-lam, lam]."""
    if lam < 0:
        raise ValueError("lambda must be nonnegative")
    return np.clip(v, -lam, lam)


def dynamics_rhs(dataset: SparseDataset, params: ModelParams, lam: float):
    """Right-hand side of the dynamics at ``params``: ``(dw, db)``.

    The rate constant is not applied here; it is folded into the step size.
    """
    g, _ = loss_and_grad(dataset, params, lam)
    dw = -g.grad_w + project_box(g.grad_w - params.w, lam)
    return dw, -g.grad_b


def kkt_residual(dataset: SparseDataset, params: ModelParams, lam: float) -> float:
    """Sup-norm violation of the projection form of the KKT conditions.

    Zero exactly at minimizers of the penalized objective; coincides with the
    sup norm of :func:`dynamics_rhs` (the residual is its negation).
    """
    g, _ = loss_and_grad(dataset, params, lam)
    r = g.grad_w + project_box(params.w - g.grad_w, lam)
    return max(_sup_norm(r), abs(g.grad_b))


def lipschitz_surrogate(dataset: SparseDataset) -> float:
    """Cheap curvature surrogate: (max row l2 norm)^2 / (4 n) + 1.

    The +1 covers the unit-Lipschitz projection term.  This can underestimate
    the true gradient Lipschitz constant; the line search covers the gap.
    """
    sq = np.zeros(dataset.n_samples)
    if dataset.values.size:
        starts = dataset.row_offsets[:-1]
        nonempty = np.flatnonzero(np.diff(dataset.row_offsets) > 0)
        sq[nonempty] = np.add.reduceat(dataset.values**2, starts[nonempty])
    max_row_sq = float(sq.max()) if sq.size else 0.0
    return max_row_sq / (4.0 * max(dataset.n_samples, 1)) + 1.0


def default_step(dataset: SparseDataset) -> float:
    return 1.0 / lipschitz_surrogate(dataset)


def hard_threshold(params: ModelParams, eps: float) -> ModelParams:
    """Copy of ``params`` with every |w_j| <= eps snapped to exactly zero."""
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    w = params.w.copy()
    w[np.abs(w) <= eps] = 0.0
    return ModelParams(w, params.b)


def initial_params(n_features: int, init: str, seed: int = 0) -> ModelParams:
    if init == "zeros":
        return ModelParams(np.zeros(n_features), 0.0)
    if init == "ones":
        return ModelParams(np.ones(n_features), 1.0)
    if init == "random":
        rng = np.random.default_rng(seed)
        return ModelParams(rng.uniform(-1.0, 1.0, n_features), float(rng.uniform(-1.0, 1.0)))
    raise ValueError(f"init must be one of {INIT_MODES}, got {init!r}")


def solve(
    dataset: SparseDataset,
    lam: float,
    config: SolverConfig = SolverConfig(),
    warm_start: ModelParams | None = None,
) -> SolveResult:
    """Integrate the dynamics until ``||rhs||_inf <= tol`` or ``max_iters``.

    Each iteration takes a forward-Euler step along :func:`dynamics_rhs`.
    With ``line_search`` on, the effective step is halved (at most 30 times,
    restored each iteration) whenever the penalized objective would increase.
    ``warm_start`` overrides the configured initialization.
    """
    if dataset.n_samples == 0:
        raise ValueError("dataset is empty")
    if lam < 0:
        raise ValueError("lambda must be nonnegative")
    eta = config.alpha_step if config.alpha_step is not None else default_step(dataset)

    start = warm_start if warm_start is not None else initial_params(
        dataset.n_features, config.init, config.seed
    )
    if start.n_features != dataset.n_features:
        raise ValueError("warm start dimension does not match dataset")

    labels = dataset.labels
    y = labels.astype(np.float64)
    n = dataset.n_samples
    w = start.w.copy()
    b = start.b
    z = dataset.dot(w) + b

    trace: list[TracePoint] | None = [] if config.record_trace else None
    iterations = config.max_iters
    terminated = "max_iters"

    # Overflow surfaces as an inf objective and is reported via
    # DivergenceError, so the elementwise numpy warnings carry no signal.
    saved_err = np.seterr(over="ignore", invalid="ignore")
    try:
        k = 0
        while k < config.max_iters:
            if k and k % _REFRESH_EVERY == 0:
                z = dataset.dot(w) + b
            p = sigmoid(z)
            resid = p - y
            g_w = dataset.transpose_dot(resid) / n
            g_b = float(resid.mean())
            dw = -g_w + project_box(g_w - w, lam)
            db = -g_b
            res = max(_sup_norm(dw), abs(db))
            obj = loss_from_margins(z, labels) + lam * float(np.abs(w).sum())
            if not math.isfinite(obj):
                raise DivergenceError(
                    f"non-finite objective at iteration {k}; reduce alpha_step"
                )
            if trace is not None and k % config.trace_stride == 0:
                trace.append(TracePoint(k, obj, res, ModelParams(w, b)))

            if res <= config.tol:
                # Confirm on margins recomputed from scratch before declaring
                # convergence; the incremental z updates drift by a few ulps.
                fresh_dw, fresh_db = dynamics_rhs(dataset, ModelParams(w, b), lam)
                if max(_sup_norm(fresh_dw), abs(fresh_db)) <= config.tol:
                    iterations = k
                    terminated = "converged"
                    break
                z = dataset.dot(w) + b
                dw, db = fresh_dw, fresh_db
                obj = loss_from_margins(z, labels) + lam * float(np.abs(w).sum())

            dz = dataset.dot(dw)
            eff = eta
            if config.line_search:
                for j in range(_LS_MAX_HALVINGS + 1):
                    w_try = w + eff * dw
                    z_try = z + eff * (dz + db)
                    f_try = loss_from_margins(z_try, labels) + lam * float(
                        np.abs(w_try).sum()
                    )
                    if math.isfinite(f_try) and f_try <= obj + _LS_SLACK:
                        break
                    if j < _LS_MAX_HALVINGS:
                        eff *= 0.5
                w, z = w_try, z_try
            else:
                w = w + eff * dw
                z = z + eff * (dz + db)
            b += eff * db
            k += 1
    finally:
        np.seterr(**saved_err)

    params = ModelParams(w, b)
    final_dw, final_db = dynamics_rhs(dataset, params, lam)
    final_res = max(_sup_norm(final_dw), abs(final_db))
    _, final_obj = loss_and_grad(dataset, params, lam)
    if not math.isfinite(final_obj):
        raise DivergenceError("non-finite objective at termination; reduce alpha_step")
    if trace is not None:
        final_point = TracePoint(iterations, final_obj, final_res, params)
        if trace and trace[-1].iteration == iterations:
            trace[-1] = final_point
        else:
            trace.append(final_point)
    return SolveResult(
        params=params,
        iterations=iterations,
        objective=final_obj,
        kkt_residual=final_res,
        terminated=terminated,
        params_sparse=hard_threshold(params, 10.0 * config.tol),
        trace=trace,
    )


def write_trace_csv(trace: list[TracePoint], f, full: bool = False):
    """Write a trace as CSV with columns iter,objective,kkt_residual[,w_0..].

    ``full`` appends one column per weight component.  Floats are written in
    shortest round-trip decimal form.
    """
    writer = csv.writer(f)
    header = ["iter", "objective", "kkt_residual"]
    if full and trace:
        header.extend(f"w_{j}" for j in range(trace[0].params.n_features))
    writer.writerow(header)
    for point in trace:
        row = [point.iteration, repr(point.objective), repr(point.kkt_residual)]
        if full:
            row.extend(repr(float(v)) for v in point.params.w)
        writer.writerow(row)


def _sup_norm(v: np.ndarray) -> float:
    return float(np.max(np.abs(v))) if v.size else 0.0
