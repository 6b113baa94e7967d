"""Feature tables, label encoding, and deterministic stratified splits.

The on-disk format is a plain UTF-8 CSV with a mandatory header whose last
column is named ``label``; every other column is a feature holding a finite
number. Class labels are arbitrary strings and are encoded to integer ids
by lexicographic order of the distinct names, so the encoding never depends
on row order.

All split operations are pure functions of (inputs, seed); the shuffle
algorithm is pinned in :mod:`selboost.rng`.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import DataError
from .rng import SplitMix64

LABEL_COLUMN = "label"


@dataclass(frozen=True)
class LabelEncoding:
    """Bijection between class-name strings and ids 0..K-1.

    Classes are kept sorted lexicographically, which makes the encoding a
    pure function of the *set* of names.
    """

    classes: tuple[str, ...]
    mapping: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self):
        if not self.classes:
            raise ValueError("at least one class is required")
        if list(self.classes) != sorted(set(self.classes)):
            raise ValueError("classes must be distinct and lexicographically sorted")
        object.__setattr__(
            self, "mapping", {name: i for i, name in enumerate(self.classes)}
        )

    @property
    def n_classes(self) -> int:
        return len(self.classes)

    def encode(self, names: Sequence[str]) -> np.ndarray:
        try:
            return np.array([self.mapping[n] for n in names], dtype=np.int64)
        except KeyError as exc:
            raise DataError(f"unknown class name: {exc.args[0]!r}") from None

    def decode(self, ids: Sequence[int]) -> list[str]:
        return [self.classes[int(i)] for i in ids]


def encode_labels(names: Sequence[str]) -> LabelEncoding:
    """Build a LabelEncoding from any non-empty list of class-name strings."""
    if len(names) == 0:
        raise ValueError("cannot encode an empty name list")
    return LabelEncoding(classes=tuple(sorted(set(names))))


@dataclass(frozen=True)
class FeatureTable:
    """Immutable n x d matrix of finite float64 features plus integer labels."""

    values: np.ndarray
    labels: np.ndarray
    feature_names: tuple[str, ...]

    def __post_init__(self):
        values = np.ascontiguousarray(self.values, dtype=np.float64)
        labels = np.asarray(self.labels, dtype=np.int64)
        if values.ndim != 2 or values.shape[0] < 1 or values.shape[1] < 1:
            raise ValueError(f"values must be a non-empty 2-d matrix, got shape {values.shape}")
        if labels.shape != (values.shape[0],):
            raise ValueError("labels length must equal the number of rows")
        if len(self.feature_names) != values.shape[1]:
            raise ValueError("feature_names length must equal the number of columns")
        if not np.isfinite(values).all():
            bad = np.argwhere(~np.isfinite(values))[0]
            raise DataError(
                f"non-finite value at row {bad[0]}, column {self.feature_names[bad[1]]!r}"
            )
        if labels.min() < 0:
            raise ValueError("labels must be non-negative class ids")
        values.setflags(write=False)
        labels.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "feature_names", tuple(self.feature_names))

    @property
    def n_samples(self) -> int:
        return self.values.shape[0]

    @property
    def n_features(self) -> int:
        return self.values.shape[1]


def load_feature_csv(path: str | Path) -> tuple[FeatureTable, LabelEncoding]:
    """Load a feature CSV: header with ``label`` last, finite numeric cells.

    Rows keep file order; labels are encoded lexicographically. Errors name
    the offending line (1-based, header = line 1) and column.
    """
    path = Path(path)
    if not path.exists():
        raise DataError(f"no such file: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        if header[-1] != LABEL_COLUMN:
            raise DataError(f"{path}: last column must be named {LABEL_COLUMN!r}")
        feature_names = header[:-1]
        if not feature_names:
            raise DataError(f"{path}: no feature columns")
        if LABEL_COLUMN in feature_names:
            raise DataError(f"{path}: {LABEL_COLUMN!r} column must be last")
        if len(set(feature_names)) != len(feature_names):
            dup = sorted({n for n in feature_names if feature_names.count(n) > 1})
            raise DataError(f"{path}: duplicate feature names {dup}")

        rows: list[list[float]] = []
        label_names: list[str] = []
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise DataError(
                    f"{path}: line {lineno}: expected {len(header)} cells, got {len(row)}"
                )
            parsed = []
            for name, cell in zip(feature_names, row):
                try:
                    value = float(cell)
                except ValueError:
                    raise DataError(
                        f"{path}: line {lineno}, column {name!r}: not a number: {cell!r}"
                    ) from None
                if not math.isfinite(value):
                    raise DataError(
                        f"{path}: line {lineno}, column {name!r}: non-finite value {cell!r}"
                    )
                parsed.append(value)
            rows.append(parsed)
            label_names.append(row[-1])

    if not rows:
        raise DataError(f"{path}: no data rows")
    encoding = encode_labels(label_names)
    table = FeatureTable(
        values=np.array(rows, dtype=np.float64),
        labels=encoding.encode(label_names),
        feature_names=tuple(feature_names),
    )
    return table, encoding


def save_feature_csv(table: FeatureTable, encoding: LabelEncoding, path: str | Path) -> None:
    """Write a table back to CSV; reloading round-trips values and labels bit-exactly."""
    path = Path(path)
    names = encoding.decode(table.labels)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(list(table.feature_names) + [LABEL_COLUMN])
        for row, label in zip(table.values, names):
            writer.writerow([repr(float(v)) for v in row] + [label])


@dataclass(frozen=True)
class SplitPlan:
    """Assignment of each row to one of k cross-validation folds."""

    k: int
    fold_of: np.ndarray
    seed: int

    def __post_init__(self):
        fold_of = np.asarray(self.fold_of, dtype=np.int64)
        if fold_of.min(initial=0) < 0 or fold_of.max(initial=0) >= self.k:
            raise ValueError("fold ids must lie in [0, k)")
        fold_of.setflags(write=False)
        object.__setattr__(self, "fold_of", fold_of)

    def test_indices(self, fold: int) -> np.ndarray:
        return np.nonzero(self.fold_of == fold)[0]

    def train_indices(self, fold: int) -> np.ndarray:
        return np.nonzero(self.fold_of != fold)[0]


def stratified_kfold(labels: Sequence[int], k: int, seed: int) -> SplitPlan:
    """Deal each class round-robin to k folds after a seeded shuffle.

    Protocol (bit-exact): one SplitMix64 generator seeded with ``seed``;
    classes are processed in ascending id order; within a class the row
    indices (ascending) are Fisher-Yates shuffled by the shared generator,
    then dealt to folds by a round-robin counter that keeps running across
    classes (sample number t overall lands in fold t % k). Per-class fold
    sizes therefore differ by at most one, and no fold is empty when
    n >= k.
    """
    labels = np.asarray(labels, dtype=np.int64)
    n = labels.shape[0]
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    if k > n:
        raise ValueError(f"k={k} exceeds the number of samples ({n})")
    rng = SplitMix64(seed)
    fold_of = np.empty(n, dtype=np.int64)
    t = 0
    for cls in np.unique(labels):
        idx = list(np.nonzero(labels == cls)[0])
        rng.shuffle(idx)
        for row in idx:
            fold_of[row] = t % k
            t += 1
    return SplitPlan(k=k, fold_of=fold_of, seed=seed)


def save_split_plan(plan: SplitPlan, path: str | Path) -> None:
    """Optional export: CSV with columns ``row_index,fold``."""
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["row_index", "fold"])
        for row, fold in enumerate(plan.fold_of):
            writer.writerow([row, int(fold)])


def train_val_split(
    indices: Sequence[int],
    labels: Sequence[int],
    val_fraction: float,
    seed: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Stratified seeded split of ``indices`` into (train, val).

    Per class the validation size is round-half-up of n_class * val_fraction
    (so the class share is within one sample of val_fraction); the remainder
    stays in train. Protocol: one SplitMix64 generator seeded with ``seed``;
    classes ascending; per class the matching indices (ascending) are
    shuffled, the first n_val go to validation. Outputs are sorted ascending.
    """
    indices = np.asarray(indices, dtype=np.int64)
    labels = np.asarray(labels, dtype=np.int64)
    if indices.size == 0:
        raise ValueError("indices must be non-empty")
    if not 0.0 < val_fraction < 1.0:
        raise ValueError(f"val_fraction must be in (0, 1), got {val_fraction}")
    if indices.size < 2:
        raise ValueError("need at least 2 samples to split")
    sub_labels = labels[indices]
    rng = SplitMix64(seed)
    train: list[int] = []
    val: list[int] = []
    for cls in np.unique(sub_labels):
        idx = list(indices[np.nonzero(sub_labels == cls)[0]])
        rng.shuffle(idx)
        n_val = int(math.floor(len(idx) * val_fraction + 0.5))
        val.extend(idx[:n_val])
        train.extend(idx[n_val:])
    return np.sort(np.array(train, dtype=np.int64)), np.sort(np.array(val, dtype=np.int64))
