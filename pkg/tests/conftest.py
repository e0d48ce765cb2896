"""Shared fixtures: synthetic dataset builders and optional benchmark files.

Benchmark LIBSVM files are looked up under ``data/`` (or $PROJLOGIT_DATA);
tests that need them skip with a pointer to scripts/fetch_datasets.py when
the files are absent.
"""

import os
from pathlib import Path

import numpy as np
import pytest

from projlogit import BENCHMARK_ROSTER, SparseDataset, load_libsvm
from projlogit.model import ModelParams, sigmoid

REPO_ROOT = Path(__file__).resolve().parents[1]
DATA_DIR = Path(os.environ.get("PROJLOGIT_DATA", REPO_ROOT / "data"))

# File names as distributed by the public LIBSVM binary collection.
_BENCH_FILES = {
    ("splice", "train"): "splice",
    ("splice", "test"): "splice.t",
    ("liver-disorders", "train"): "liver-disorders",
    ("liver-disorders", "test"): "liver-disorders.t",
    ("ijcnn1", "train"): "ijcnn1",
    ("ijcnn1", "test"): "ijcnn1.t",
}


def require_benchmark(name: str, split: str) -> SparseDataset:
    """Load a benchmark split or skip the calling test if the file is absent."""
    path = DATA_DIR / _BENCH_FILES[(name, split)]
    if not path.exists():
        pytest.skip(
            f"benchmark file {path} not present; run "
            f"'python scripts/fetch_datasets.py --dest {DATA_DIR}' "
            f"(needs network access) or set PROJLOGIT_DATA"
        )
    hint = BENCHMARK_ROSTER[name].n_features
    return load_libsvm(path, n_features_hint=hint)


def random_dataset(seed, n, d, density=0.6, scale=1.0, noise=0.5) -> SparseDataset:
    """Sparse dataset with labels planted by a random logistic model.

    Guarantees both classes are present.  ``noise`` blends toward a coin flip
    so the classes are not separable.
    """
    rng = np.random.default_rng(seed)
    offsets = [0]
    cols = []
    vals = []
    for _ in range(n):
        k = max(1, rng.binomial(d, density))
        row_cols = np.sort(rng.choice(d, size=k, replace=False))
        cols.extend(row_cols.tolist())
        vals.extend((scale * rng.standard_normal(k)).tolist())
        offsets.append(len(cols))
    w_true = rng.standard_normal(d) * 2.0
    b_true = float(rng.standard_normal())
    ds_raw = SparseDataset(
        n_samples=n,
        n_features=d,
        row_offsets=np.array(offsets),
        col_indices=np.array(cols),
        values=np.array(vals),
        labels=np.zeros(n, dtype=np.int8),
    )
    p = sigmoid(ds_raw.dot(w_true) + b_true)
    p = (1.0 - noise) * p + noise * 0.5
    labels = (rng.uniform(size=n) < p).astype(np.int8)
    if labels.min() == labels.max():  # ensure both classes
        labels[0] = 1 - labels[0]
    return SparseDataset(
        n_samples=n,
        n_features=d,
        row_offsets=ds_raw.row_offsets,
        col_indices=ds_raw.col_indices,
        values=ds_raw.values,
        labels=labels,
    )


def dense_matrix(ds: SparseDataset) -> np.ndarray:
    """Brute-force dense materialization, built row by row from the raw arrays."""
    X = np.zeros((ds.n_samples, ds.n_features))
    for i in range(ds.n_samples):
        cols, vals = ds.row(i)
        X[i, cols] = vals
    return X


def random_params(seed, d, scale=1.0) -> ModelParams:
    rng = np.random.default_rng(seed)
    return ModelParams(scale * rng.standard_normal(d), float(scale * rng.standard_normal()))


@pytest.fixture
def toy_dataset() -> SparseDataset:
    """The 2x3 hand dataset: rows {(0,0.5),(2,2.0)} and {(1,1.0)}, labels [1,0]."""
    return SparseDataset(
        n_samples=2,
        n_features=3,
        row_offsets=np.array([0, 2, 3]),
        col_indices=np.array([0, 2, 1]),
        values=np.array([0.5, 2.0, 1.0]),
        labels=np.array([1, 0], dtype=np.int8),
    )


def overflow_prone_dataset() -> SparseDataset:
    """|grad_w| ~ 3 at the origin, so an enormous fixed step overflows the weights."""
    return SparseDataset(
        n_samples=4,
        n_features=1,
        row_offsets=np.array([0, 1, 2, 3, 4]),
        col_indices=np.array([0, 0, 0, 0]),
        values=np.array([8.0, 8.0, 8.0, 0.01]),
        labels=np.array([1, 1, 1, 0], dtype=np.int8),
    )


def brute_force_roc(scores, labels):
    """Threshold sweep at every distinct score: predict positive iff score >= s."""
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    n_pos = int(np.sum(labels == 1))
    n_neg = int(np.sum(labels == 0))
    points = [(0.0, 0.0)]
    for s in sorted(set(scores.tolist()), reverse=True):
        pred = scores >= s
        tpr = float(np.sum(pred & (labels == 1)) / n_pos)
        fpr = float(np.sum(pred & (labels == 0)) / n_neg)
        points.append((fpr, tpr))
    return points


def mann_whitney(scores, labels):
    """Probability a random positive outscores a random negative, ties half-credit."""
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    pos = scores[labels == 1]
    neg = scores[labels == 0]
    wins = 0.0
    for sp in pos:
        for sn in neg:
            if sp > sn:
                wins += 1.0
            elif sp == sn:
                wins += 0.5
    return wins / (len(pos) * len(neg))


def random_scores_labels(seed, n, tie_prone=False):
    rng = np.random.default_rng(seed)
    if tie_prone:
        scores = rng.integers(0, 6, size=n) / 5.0
    else:
        scores = rng.uniform(size=n)
    labels = rng.integers(0, 2, size=n).astype(np.int8)
    if labels.min() == labels.max():
        labels[0] = 1 - labels[0]
    return scores, labels
