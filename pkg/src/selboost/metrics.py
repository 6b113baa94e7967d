"""Confusion matrices and the classification metric bundle.

Metrics are the usual five ratios (accuracy, precision, recall,
specificity, F1) read from a K x K confusion matrix whose rows are true
classes and columns predicted classes. A zero-denominator metric is
*undefined* (None), never silently coerced to 0 or 1; aggregation skips
undefined values and reports how many were skipped, because coercion would
distort fold averages.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

METRIC_NAMES = ("accuracy", "precision", "recall", "specificity", "f1")

# Row order used by the plain-text table rendering.
_TABLE_ROWS = (
    ("Recall", "recall"),
    ("Specificity", "specificity"),
    ("Precision", "precision"),
    ("F1-Score", "f1"),
    ("Accuracy", "accuracy"),
)


@dataclass(frozen=True)
class MetricsReport:
    """Five-metric bundle plus a tag saying what 'positive' meant.

    ``positive_class`` is a class id for one-vs-rest reports, or an
    aggregation tag such as "macro" / "fold-average". For aggregated
    reports ``undefined_counts`` says how many input values were skipped
    per metric.
    """

    accuracy: float | None
    precision: float | None
    recall: float | None
    specificity: float | None
    f1: float | None
    positive_class: int | str
    undefined_counts: dict[str, int] = field(default_factory=dict)

    def value(self, metric: str) -> float | None:
        if metric not in METRIC_NAMES:
            raise ValueError(f"unknown metric {metric!r}")
        return getattr(self, metric)

    def to_dict(self) -> dict:
        out = {name: self.value(name) for name in METRIC_NAMES}
        out["positive_class"] = self.positive_class
        if self.undefined_counts:
            out["undefined_counts"] = dict(self.undefined_counts)
        return out

    @classmethod
    def from_dict(cls, payload: dict) -> "MetricsReport":
        return cls(
            accuracy=payload.get("accuracy"),
            precision=payload.get("precision"),
            recall=payload.get("recall"),
            specificity=payload.get("specificity"),
            f1=payload.get("f1"),
            positive_class=payload["positive_class"],
            undefined_counts=dict(payload.get("undefined_counts", {})),
        )


def confusion(y_true: Sequence[int], y_pred: Sequence[int], n_classes: int) -> np.ndarray:
    """counts[t][p] = number of samples with true class t predicted as p."""
    y_true = np.asarray(y_true, dtype=np.int64)
    y_pred = np.asarray(y_pred, dtype=np.int64)
    if y_true.shape != y_pred.shape:
        raise ValueError("y_true and y_pred must have equal length")
    for name, y in (("y_true", y_true), ("y_pred", y_pred)):
        if y.size and (y.min() < 0 or y.max() >= n_classes):
            raise ValueError(f"{name} contains a label outside [0, {n_classes})")
    cm = np.zeros((n_classes, n_classes), dtype=np.int64)
    np.add.at(cm, (y_true, y_pred), 1)
    return cm


def _ratio(num: int, den: int) -> float | None:
    return num / den if den > 0 else None


def _from_counts(tp: int, fp: int, fn: int, tn: int, tag: int | str) -> MetricsReport:
    precision = _ratio(tp, tp + fp)
    recall = _ratio(tp, tp + fn)
    if precision is None or recall is None or precision + recall == 0:
        f1 = None
    else:
        f1 = 2.0 * recall * precision / (recall + precision)
    return MetricsReport(
        accuracy=_ratio(tp + tn, tp + fp + fn + tn),
        precision=precision,
        recall=recall,
        specificity=_ratio(tn, tn + fp),
        f1=f1,
        positive_class=tag,
    )


def binary_metrics(cm: np.ndarray, positive: int) -> MetricsReport:
    """Metric bundle for a 2x2 matrix, reading TP/FP/FN/TN relative to ``positive``."""
    cm = np.asarray(cm)
    if cm.shape != (2, 2):
        raise ValueError(f"binary metrics need a 2x2 matrix, got {cm.shape}")
    if positive not in (0, 1):
        raise ValueError("positive class id must be 0 or 1")
    neg = 1 - positive
    return _from_counts(
        tp=int(cm[positive, positive]),
        fp=int(cm[neg, positive]),
        fn=int(cm[positive, neg]),
        tn=int(cm[neg, neg]),
        tag=positive,
    )


def per_class_metrics(cm: np.ndarray) -> list[MetricsReport]:
    """One-vs-rest metric bundle for every class of a K x K matrix."""
    cm = np.asarray(cm)
    if cm.ndim != 2 or cm.shape[0] != cm.shape[1] or cm.shape[0] < 2:
        raise ValueError(f"need a square K x K matrix with K >= 2, got {cm.shape}")
    total = int(cm.sum())
    reports = []
    for c in range(cm.shape[0]):
        tp = int(cm[c, c])
        fn = int(cm[c].sum()) - tp
        fp = int(cm[:, c].sum()) - tp
        tn = total - tp - fn - fp
        reports.append(_from_counts(tp=tp, fp=fp, fn=fn, tn=tn, tag=c))
    return reports


def _average(reports: Sequence[MetricsReport], tag: int | str) -> MetricsReport:
    if not reports:
        raise ValueError("cannot average an empty report list")
    values: dict[str, float | None] = {}
    undefined: dict[str, int] = {}
    for name in METRIC_NAMES:
        defined = [r.value(name) for r in reports if r.value(name) is not None]
        skipped = len(reports) - len(defined)
        if skipped:
            undefined[name] = skipped
        values[name] = sum(defined) / len(defined) if defined else None
    return MetricsReport(positive_class=tag, undefined_counts=undefined, **values)


def macro_average(reports: Sequence[MetricsReport]) -> MetricsReport:
    """Arithmetic mean per metric over the defined values (one-vs-rest inputs)."""
    return _average(reports, "macro")


def fold_average(reports: Sequence[MetricsReport]) -> MetricsReport:
    """Mean per metric across folds (per-fold metrics averaged, not pooled counts)."""
    tags = {r.positive_class for r in reports}
    tag = tags.pop() if len(tags) == 1 else "mixed"
    return _average(reports, tag)


def overlap(cms: Iterable[np.ndarray]) -> np.ndarray:
    """Element-wise sum of per-fold confusion matrices."""
    cms = [np.asarray(cm) for cm in cms]
    if not cms:
        raise ValueError("need at least one confusion matrix")
    shape = cms[0].shape
    for cm in cms[1:]:
        if cm.shape != shape:
            raise ValueError(f"shape mismatch: {cm.shape} vs {shape}")
    return np.sum(cms, axis=0)


def _cell(value: float | None) -> str:
    return "n/a" if value is None else f"{value * 100:.2f}"


def reports_table(columns: Sequence[tuple[str, MetricsReport]]) -> str:
    """Aligned plain-text table, metrics as rows (percent, two decimals)."""
    headers = ["Metric"] + [label for label, _ in columns]
    rows = [
        [row_label] + [_cell(report.value(name)) for _, report in columns]
        for row_label, name in _TABLE_ROWS
    ]
    widths = [max(len(row[c]) for row in [headers] + rows) for c in range(len(headers))]
    lines = []
    for row in [headers] + rows:
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
    return "\n".join(lines) + "\n"


def metrics_table_text(
    fold_reports: Sequence[MetricsReport], average: MetricsReport
) -> str:
    """Per-fold columns plus an Average column, one row per metric."""
    columns = [(f"Folds-{i + 1}", r) for i, r in enumerate(fold_reports)]
    columns.append(("Average", average))
    return reports_table(columns)
