"""L1-regularized logistic regression via discretized projection dynamics.

The production solver integrates a projection dynamical system whose
equilibria are the KKT points of the penalized problem; an independent
proximal-gradient (ISTA) oracle cross-checks it.  Includes LIBSVM ingestion,
classification metrics, regularization-path tooling, and a CLI.
"""

__version__ = "0.1.0"

from .dataset import (
    BENCHMARK_ROSTER,
    DatasetError,
    DatasetInfo,
    SparseDataset,
    label_map,
    load_libsvm,
    parse_libsvm,
)
from .metrics import EvalReport, accuracy, auroc, evaluate, roc_curve, sparsity_stats
from .model import (
    LossGrad,
    ModelParams,
    load_model,
    loss_and_grad,
    predict_proba,
    save_model,
    sigmoid,
)
from .oracle import (
    OracleResult,
    finite_diff_grad,
    ista_solve,
    lambda_max,
    optimal_zero_bias,
    soft_threshold,
)
from .path import PathRecord, PathResult, lambda_grid, sweep
from .projection_solver import (
    DivergenceError,
    SolveResult,
    SolverConfig,
    TracePoint,
    dynamics_rhs,
    hard_threshold,
    kkt_residual,
    project_box,
    solve,
)

__all__ = [
    "__version__",
    "BENCHMARK_ROSTER",
    "DatasetError",
    "DatasetInfo",
    "SparseDataset",
    "label_map",
    "load_libsvm",
    "parse_libsvm",
    "EvalReport",
    "accuracy",
    "auroc",
    "evaluate",
    "roc_curve",
    "sparsity_stats",
    "LossGrad",
    "ModelParams",
    "load_model",
    "loss_and_grad",
    "predict_proba",
    "save_model",
    "sigmoid",
    "OracleResult",
    "finite_diff_grad",
    "ista_solve",
    "lambda_max",
    "optimal_zero_bias",
    "soft_threshold",
    "PathRecord",
    "PathResult",
    "lambda_grid",
    "sweep",
    "DivergenceError",
    "SolveResult",
    "SolverConfig",
    "TracePoint",
    "dynamics_rhs",
    "hard_threshold",
    "kkt_residual",
    "project_box",
    "solve",
]
