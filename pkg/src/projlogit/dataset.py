"""LIBSVM-format parsing and the immutable sparse dataset container.

The on-disk format is the classic sparse text layout used by the public
LIBSVM dataset repository: one sample per line, ``<label> <idx>:<val> ...``
with 1-based, strictly increasing feature indices.  Labels are canonicalized
to {0, 1} at parse time (numerically smaller raw value -> 0).
"""

from __future__ import annotations

import math
import sys
import warnings
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np
import scipy.sparse as sp

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

__all__ = [
    "DatasetError",
    "SingleClassWarning",
    "DatasetInfo",
    "SparseDataset",
    "BENCHMARK_ROSTER",
    "ManifestEntry",
    "label_map",
    "parse_libsvm",
    "load_libsvm",
    "read_manifest",
]


class DatasetError(ValueError):
    """Malformed LIBSVM input or an inconsistent dataset structure."""


class SingleClassWarning(UserWarning):
    """All labels in a file share one value; every sample was mapped to class 1."""


@dataclass(frozen=True)
class DatasetInfo:
    """Expected shape of a named benchmark dataset (train/test split sizes)."""

    name: str
    n_features: int
    n_train: int
    n_test: int

    def __post_init__(self):
        if min(self.n_features, self.n_train, self.n_test) <= 0:
            raise ValueError("dataset counts must be positive")


# The eight public LIBSVM binary-classification sets used by the bench tooling,
# with the dimensions of their official train/test splits.
BENCHMARK_ROSTER = {
    info.name: info
    for info in (
        DatasetInfo("splice", 60, 1000, 2175),
        DatasetInfo("madelon", 500, 2000, 600),
        DatasetInfo("liver-disorders", 5, 145, 200),
        DatasetInfo("ijcnn1", 22, 49990, 91701),
        DatasetInfo("a1a", 123, 1605, 30956),
        DatasetInfo("a9a", 123, 32561, 16281),
        DatasetInfo("leukemia", 7129, 38, 34),
        DatasetInfo("gisette", 5000, 6000, 1000),
    )
}


@dataclass(frozen=True, eq=False)
class SparseDataset:
    """Row-compressed sparse feature matrix with canonical {0, 1} labels.

    Instances are immutable after construction (all arrays are marked
    read-only) and therefore safe to share across threads.
    """

    n_samples: int
    n_features: int
    row_offsets: np.ndarray
    col_indices: np.ndarray
    values: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        offsets = np.array(self.row_offsets, dtype=np.int64)
        cols = np.array(self.col_indices, dtype=np.int64)
        vals = np.array(self.values, dtype=np.float64)
        labels = np.array(self.labels, dtype=np.int8)
        if self.n_samples < 0 or self.n_features < 0:
            raise DatasetError("negative dimensions")
        if offsets.shape != (self.n_samples + 1,):
            raise DatasetError("row_offsets must have length n_samples + 1")
        if offsets[0] != 0 or offsets[-1] != vals.size or cols.size != vals.size:
            raise DatasetError("row_offsets inconsistent with value arrays")
        if np.any(np.diff(offsets) < 0):
            raise DatasetError("row_offsets must be nondecreasing")
        if cols.size and (cols.min() < 0 or cols.max() >= self.n_features):
            raise DatasetError("column index out of range")
        if cols.size > 1:
            within_row = np.ones(cols.size - 1, dtype=bool)
            starts = offsets[1:-1]
            starts = starts[(starts > 0) & (starts < cols.size)]
            within_row[starts - 1] = False
            if np.any(np.diff(cols)[within_row] <= 0):
                raise DatasetError("column indices must be strictly increasing within a row")
        if not np.all(np.isfinite(vals)):
            raise DatasetError("nonfinite feature value")
        if labels.shape != (self.n_samples,) or not np.all((labels == 0) | (labels == 1)):
            raise DatasetError("labels must be a {0,1} array of length n_samples")
        for name, arr in (
            ("row_offsets", offsets),
            ("col_indices", cols),
            ("values", vals),
            ("labels", labels),
        ):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @cached_property
    def _csr(self) -> sp.csr_matrix:
        return sp.csr_matrix(
            (self.values, self.col_indices, self.row_offsets),
            shape=(self.n_samples, self.n_features),
        )

    @property
    def nnz(self) -> int:
        return int(self.values.size)

    @property
    def class_prevalence(self) -> float:
        """Fraction of samples in class 1."""
        return float(self.labels.mean()) if self.n_samples else 0.0

    def row(self, i: int):
        """Return (column indices, values) of row ``i`` as read-only views."""
        if not 0 <= i < self.n_samples:
            raise IndexError(f"row index {i} out of range for {self.n_samples} samples")
        lo, hi = self.row_offsets[i], self.row_offsets[i + 1]
        return self.col_indices[lo:hi], self.values[lo:hi]

    def row_dot(self, i: int, w: np.ndarray) -> float:
        """Inner product of row ``i`` with a dense vector ``w``."""
        w = np.asarray(w, dtype=np.float64)
        if w.shape != (self.n_features,):
            raise DatasetError(f"w has length {w.shape}, expected ({self.n_features},)")
        cols, vals = self.row(i)
        return float(vals @ w[cols])

    def dot(self, w: np.ndarray) -> np.ndarray:
        """Dense matrix-vector product X @ w."""
        w = np.asarray(w, dtype=np.float64)
        if w.shape != (self.n_features,):
            raise DatasetError(f"w has length {w.shape}, expected ({self.n_features},)")
        return self._csr @ w

    def transpose_dot(self, r: np.ndarray) -> np.ndarray:
        """Dense product X.T @ r for a per-sample vector ``r``."""
        r = np.asarray(r, dtype=np.float64)
        if r.shape != (self.n_samples,):
            raise DatasetError(f"r has length {r.shape}, expected ({self.n_samples},)")
        return self._csr.T @ r

    def subset(self, rows) -> "SparseDataset":
        """New dataset restricted to the given row indices (in the given order)."""
        rows = np.asarray(rows, dtype=np.int64)
        m = self._csr[rows]
        return SparseDataset(
            n_samples=int(rows.size),
            n_features=self.n_features,
            row_offsets=m.indptr,
            col_indices=m.indices,
            values=m.data,
            labels=self.labels[rows],
        )

    def to_dense(self) -> np.ndarray:
        return self._csr.toarray()

    def to_libsvm(self) -> str:
        """Serialize back to LIBSVM text (1-based indices, labels as 0/1)."""
        lines = []
        for i in range(self.n_samples):
            cols, vals = self.row(i)
            parts = [str(int(self.labels[i]))]
            parts.extend(f"{c + 1}:{float(v)!r}" for c, v in zip(cols, vals))
            lines.append(" ".join(parts))
        return "\n".join(lines) + "\n"


def label_map(raw_labels) -> np.ndarray:
    """Canonicalize at most two distinct raw label values to {0, 1}.

    The numerically smaller raw value maps to 0 and the larger to 1, so the
    result does not depend on file ordering.  A single-valued input maps every
    sample to 1 and emits a :class:`SingleClassWarning`.
    """
    raw = np.asarray(raw_labels, dtype=np.float64)
    if raw.size == 0:
        raise DatasetError("empty label array")
    distinct = np.unique(raw)
    if distinct.size > 2:
        raise DatasetError(f"more than two distinct labels: {distinct[:4].tolist()} ...")
    if distinct.size == 1:
        warnings.warn(
            f"all labels equal {distinct[0]}; mapping every sample to class 1",
            SingleClassWarning,
            stacklevel=2,
        )
        return np.ones(raw.shape, dtype=np.int8)
    return (raw == distinct[1]).astype(np.int8)


def parse_libsvm(source, n_features_hint: int | None = None) -> SparseDataset:
    """Parse LIBSVM text into a :class:`SparseDataset`.

    ``source`` may be a str, bytes, or a file-like object (text or binary).
    ``n_features_hint`` widens the feature count beyond the largest observed
    index; pass the training dimension when parsing a test split so weight
    vectors stay aligned.
    """
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        source = source.decode("utf-8")

    raw_labels: list[float] = []
    cols: list[int] = []
    vals: list[float] = []
    offsets = [0]
    max_index = 0
    for lineno, line in enumerate(source.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        fields = line.split()
        try:
            raw_labels.append(float(fields[0]))
        except ValueError:
            raise DatasetError(f"line {lineno}: bad label {fields[0]!r}") from None
        prev = 0
        for tok in fields[1:]:
            idx_s, sep, val_s = tok.partition(":")
            if not sep:
                raise DatasetError(f"line {lineno}: expected 'index:value', got {tok!r}")
            try:
                idx = int(idx_s)
                val = float(val_s)
            except ValueError:
                raise DatasetError(f"line {lineno}: nonnumeric entry {tok!r}") from None
            if idx < 1:
                raise DatasetError(f"line {lineno}: feature indices are 1-based, got {idx}")
            if idx <= prev:
                raise DatasetError(
                    f"line {lineno}: feature index {idx} not strictly increasing"
                )
            if not math.isfinite(val):
                raise DatasetError(f"line {lineno}: nonfinite value {val_s!r}")
            prev = idx
            cols.append(idx - 1)
            vals.append(val)
        offsets.append(len(cols))
        max_index = max(max_index, prev)
    if not raw_labels:
        raise DatasetError("empty dataset")
    n_features = max(max_index, int(n_features_hint or 0))
    return SparseDataset(
        n_samples=len(raw_labels),
        n_features=n_features,
        row_offsets=np.asarray(offsets, dtype=np.int64),
        col_indices=np.asarray(cols, dtype=np.int64),
        values=np.asarray(vals, dtype=np.float64),
        labels=label_map(np.asarray(raw_labels)),
    )


def load_libsvm(path, n_features_hint: int | None = None) -> SparseDataset:
    """Parse a LIBSVM file from disk."""
    with open(path, "rb") as f:
        return parse_libsvm(f, n_features_hint=n_features_hint)


@dataclass(frozen=True)
class ManifestEntry:
    """One dataset entry of a ``datasets.toml`` bench manifest."""

    name: str
    train_path: Path
    test_path: Path
    lam: float
    info: DatasetInfo | None = None


def read_manifest(path) -> list[ManifestEntry]:
    """Read a bench manifest: ``[[dataset]]`` tables with name/train/test/lambda.

    Expected dimensions come from :data:`BENCHMARK_ROSTER` when the name is a
    known benchmark, or from explicit ``n_features``/``n_train``/``n_test``
    keys.  Relative paths are resolved against the manifest's directory.
    """
    path = Path(path)
    with open(path, "rb") as f:
        doc = tomllib.load(f)
    entries = doc.get("dataset", [])
    if not entries:
        raise DatasetError(f"{path}: manifest lists no datasets")
    base = path.parent
    out = []
    for i, entry in enumerate(entries):
        try:
            name = str(entry["name"])
            train = base / str(entry["train"])
            test = base / str(entry["test"])
            lam = float(entry["lambda"])
        except KeyError as e:
            raise DatasetError(f"{path}: dataset #{i + 1} is missing key {e}") from None
        if lam < 0:
            raise DatasetError(f"{path}: dataset {name!r} has negative lambda")
        info = BENCHMARK_ROSTER.get(name)
        if {"n_features", "n_train", "n_test"} <= entry.keys():
            info = DatasetInfo(name, entry["n_features"], entry["n_train"], entry["n_test"])
        out.append(ManifestEntry(name, train, test, lam, info))
    return out
