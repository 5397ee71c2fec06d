"""Shared domain types: samples, dictionaries, coefficients and class reports.

A Dictionary stores training samples as the columns of a P x N matrix,
grouped by class.  All classification modules operate on these types and
treat them as immutable after construction.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class ConfigError(ValueError):
    """Invalid configuration value."""


class DataError(ValueError):
    """Invalid or inconsistent input data."""


@dataclass(frozen=True)
class Sample:
    """A vectorized observation with intensities in [0, 1]."""

    values: np.ndarray
    source_id: str | None = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 1 or values.size == 0:
            raise DataError("sample must be a nonempty 1-D vector")
        if not np.all(np.isfinite(values)):
            raise DataError("sample contains non-finite entries")
        values = values.copy()
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    def __len__(self):
        return self.values.size


@dataclass(frozen=True)
class Dictionary:
    """Column-major matrix of training samples with per-class bookkeeping.

    ``class_index`` maps each class id to the (ascending) column positions
    holding that class's samples; it always partitions ``range(n_samples)``.
    """

    columns: np.ndarray
    labels: tuple[str, ...]
    class_index: dict[str, list[int]]
    normalized: bool

    def __post_init__(self):
        columns = np.asarray(self.columns, dtype=np.float64)
        if columns.ndim != 2 or columns.shape[0] < 1 or columns.shape[1] < 1:
            raise DataError("dictionary matrix must be 2-D and nonempty")
        if not np.all(np.isfinite(columns)):
            raise DataError("dictionary contains non-finite entries")
        if len(self.labels) != columns.shape[1]:
            raise DataError("label count does not match column count")
        if self.normalized:
            norms = np.linalg.norm(columns, axis=0)
            if np.any(np.abs(norms - 1.0) > 1e-9):
                raise DataError("normalized flag set but columns are not unit norm")
        seen = []
        for cid, positions in self.class_index.items():
            for j in positions:
                if self.labels[j] != cid:
                    raise DataError(f"class_index inconsistent at column {j}")
            seen.extend(positions)
        if sorted(seen) != list(range(columns.shape[1])):
            raise DataError("class_index does not partition the columns")
        columns = columns.copy()
        columns.flags.writeable = False
        object.__setattr__(self, "columns", columns)
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(
            self, "class_index", {c: list(p) for c, p in self.class_index.items()}
        )

    @property
    def dim(self) -> int:
        return self.columns.shape[0]

    @property
    def n_samples(self) -> int:
        return self.columns.shape[1]

    @property
    def classes(self) -> list[str]:
        """Class ids in deterministic (lexicographic) order."""
        return sorted(self.class_index)

    def gram(self) -> np.ndarray:
        """Cached X^T X of the full dictionary (built once, read-only)."""
        cached = self.__dict__.get("_gram")
        if cached is None:
            cached = self.columns.T @ self.columns
            cached.flags.writeable = False
            object.__setattr__(self, "_gram", cached)
        return cached

    def restricted(self, classes) -> "Dictionary":
        """Sub-dictionary keeping only the given classes (original column order)."""
        keep = set(classes)
        missing = keep - set(self.class_index)
        if missing:
            raise DataError(f"unknown classes: {sorted(missing)}")
        if keep == set(self.class_index):
            return self
        positions = sorted(j for c in keep for j in self.class_index[c])
        labels = [self.labels[j] for j in positions]
        index: dict[str, list[int]] = {}
        for new_j, j in enumerate(positions):
            index.setdefault(self.labels[j], []).append(new_j)
        return Dictionary(self.columns[:, positions], tuple(labels), index, self.normalized)



def build_dictionary(samples, normalize: bool) -> Dictionary:
    """Stack (Sample, class-id) pairs into a Dictionary, in input order.

    With ``normalize`` each column is scaled to unit l2 norm; zero columns
    are rejected because they cannot be normalized.
    """
    samples = list(samples)
    if not samples:
        raise DataError("cannot build a dictionary from no samples")
    dim = len(samples[0][0])
    for sample, _ in samples:
        if len(sample) != dim:
            raise DataError(
                f"sample length mismatch: expected {dim}, got {len(sample)}"
            )
    columns = np.column_stack([s.values for s, _ in samples])
    if normalize:
        norms = np.linalg.norm(columns, axis=0)
        if np.any(norms == 0.0):
            raise DataError("zero-norm column cannot be normalized")
        columns = columns / norms
    labels = tuple(str(cid) for _, cid in samples)
    index: dict[str, list[int]] = {}
    for j, cid in enumerate(labels):
        index.setdefault(cid, []).append(j)
    return Dictionary(columns, labels, index, normalize)


def merge_dictionaries(original: Dictionary, auxiliary: Dictionary) -> Dictionary:
    """Concatenate two dictionaries column-wise (original first)."""
    if original.dim != auxiliary.dim:
        raise DataError(
            f"dimension mismatch: {original.dim} vs {auxiliary.dim}"
        )
    if original.normalized != auxiliary.normalized:
        raise DataError("cannot merge dictionaries with different normalization")
    columns = np.hstack([original.columns, auxiliary.columns])
    labels = original.labels + auxiliary.labels
    index = {c: list(p) for c, p in original.class_index.items()}
    offset = original.n_samples
    for cid, positions in auxiliary.class_index.items():
        index.setdefault(cid, []).extend(j + offset for j in positions)
    return Dictionary(columns, labels, index, original.normalized)


@dataclass(frozen=True)
class ClassReport:
    """Per-class reconstructions and errors for one query, plus the label."""

    per_class: tuple  # (class-id, reconstruction vector, error) triples
    predicted: str

    def errors(self) -> dict[str, float]:
        return {cid: err for cid, _, err in self.per_class}
