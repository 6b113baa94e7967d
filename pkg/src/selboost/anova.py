"""Per-feature one-way ANOVA F statistics and top-k selection.

For each feature the between-group mean square (class means vs grand mean,
df = K-1) is divided by the within-group mean square (deviations from the
class mean, df = N-K). Large F means the feature separates the classes
well. Sums of squared deviations are accumulated in float64 with the
two-pass (mean first, deviations second) algorithm.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .dataset import FeatureTable


@dataclass(frozen=True)
class FScoreTable:
    """Per-feature ANOVA statistics and the induced descending-F ranking."""

    msb: np.ndarray
    msw: np.ndarray
    f: np.ndarray
    df_b: int
    df_w: int
    ranking: np.ndarray

    @property
    def n_features(self) -> int:
        return self.f.shape[0]


def f_scores(table: FeatureTable) -> FScoreTable:
    """Compute MSB, MSW and F for every feature of ``table``.

    Degenerate features: msw == 0 with msb > 0 gives F = +inf (perfectly
    class-separating, ranks first); msb == msw == 0 gives F = 0 (constant
    feature, uninformative).
    """
    X = table.values
    y = table.labels
    n, d = X.shape
    classes, counts = np.unique(y, return_counts=True)
    k = classes.shape[0]
    if k < 2:
        raise ValueError("need at least 2 classes for an F statistic")
    if n <= k:
        raise ValueError(f"need more samples ({n}) than classes ({k})")

    grand_mean = X.mean(axis=0)
    ss_between = np.zeros(d)
    ss_within = np.zeros(d)
    for cls, n_i in zip(classes, counts):
        group = X[y == cls]
        mean_i = group.mean(axis=0)
        ss_between += n_i * (mean_i - grand_mean) ** 2
        ss_within += ((group - mean_i) ** 2).sum(axis=0)

    df_b = k - 1
    df_w = n - k
    msb = ss_between / df_b
    msw = ss_within / df_w

    f = np.zeros(d)
    pos = msw > 0.0
    f[pos] = msb[pos] / msw[pos]
    f[~pos & (msb > 0.0)] = np.inf

    return FScoreTable(
        msb=msb, msw=msw, f=f, df_b=df_b, df_w=df_w, ranking=rank_order(f)
    )


def rank_order(f: np.ndarray) -> np.ndarray:
    """Indices sorted by descending F; ties broken by ascending feature index."""
    # lexsort is stable: the secondary arange key resolves ties deterministically
    return np.lexsort((np.arange(f.shape[0]), -f))


def rank_features(scores: FScoreTable) -> np.ndarray:
    """The feature ranking induced by ``scores`` (best feature first)."""
    return scores.ranking


def select_top_k(
    table: FeatureTable, ranking: Sequence[int], k: int
) -> tuple[FeatureTable, np.ndarray]:
    """Keep the k best-ranked features, columns reordered to ranking order.

    Returns the reduced table and the selected indices in the original
    column space. Labels are untouched.
    """
    d = table.n_features
    if not 1 <= k <= d:
        raise ValueError(f"k must be in [1, {d}], got {k}")
    selected = np.asarray(ranking, dtype=np.int64)[:k]
    reduced = FeatureTable(
        values=table.values[:, selected],
        labels=table.labels,
        feature_names=tuple(table.feature_names[i] for i in selected),
    )
    return reduced, selected


def save_scores_csv(scores: FScoreTable, path: str | Path, feature_names: Sequence[str] | None = None) -> None:
    """Optional dump: CSV ``feature,msb,msw,f,rank`` (rank 1 = best)."""
    d = scores.n_features
    names = list(feature_names) if feature_names is not None else [f"f{i}" for i in range(d)]
    if len(names) != d:
        raise ValueError("feature_names length must match the score table")
    rank_of = np.empty(d, dtype=np.int64)
    rank_of[scores.ranking] = np.arange(1, d + 1)
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["feature", "msb", "msw", "f", "rank"])
        for i in range(d):
            writer.writerow(
                [names[i], repr(float(scores.msb[i])), repr(float(scores.msw[i])),
                 repr(float(scores.f[i])), int(rank_of[i])]
            )
