"""End-to-end experiment orchestration.

Protocols:

* ``cv`` — stratified k-fold cross-validation. Inside each fold the ANOVA
  scores (and, when sweeping, the validation carve) are computed from that
  fold's training rows only, so no information leaks from the held-out
  fold.
* ``holdout`` — one stratified train/test split (test share =
  ``val_fraction``), evaluated once.

The feature count is either fixed (``n_features``) or chosen by sweeping a
grid of top-k counts against a validation split carved out of the training
data; ties go to the smallest k.

Reports are plain data with canonical JSON rendering: two runs with the
same config and input produce byte-identical JSON except for the
``timings`` section.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .anova import f_scores, save_scores_csv, select_top_k
from .dataset import (
    FeatureTable,
    LabelEncoding,
    load_feature_csv,
    stratified_kfold,
    train_val_split,
)
from .errors import ConfigError, DataError, InvariantError, SchemaError
from .gbt import (
    BINARY_LOGISTIC,
    SOFTMAX,
    ObjectiveSpec,
    TrainParams,
    load_model,
    save_model,
    train,
)
from .metrics import (
    MetricsReport,
    binary_metrics,
    confusion,
    fold_average,
    macro_average,
    metrics_table_text,
    overlap,
    per_class_metrics,
    reports_table,
)

REPORT_SCHEMA_VERSION = 1
SELECTION_SCHEMA_VERSION = 1

TASK_BINARY = "binary"
TASK_MULTICLASS = "multiclass"
PROTOCOL_CV = "cv"
PROTOCOL_HOLDOUT = "holdout"

# Optional test/instrumentation callback: hooks(event, payload). Events:
# "fold_scores", "sweep_carve", "sweep_scores", "sweep_point", "fold_eval".
Hooks = Callable[[str, dict], None]


@dataclass(frozen=True)
class RunConfig:
    """Declarative description of one experiment run."""

    input: str | None = None
    task: str = TASK_BINARY
    protocol: str = PROTOCOL_CV
    positive_class: str | None = None
    folds: int = 5
    seed: int = 0
    n_features: int | None = None
    k_min: int = 50
    k_max: int = 500
    k_step: int = 1
    val_fraction: float = 0.2
    global_sweep: bool = False
    train_params: TrainParams = field(default_factory=TrainParams)
    out_dir: str | None = None
    format: str = "json"

    def __post_init__(self):
        if self.task not in (TASK_BINARY, TASK_MULTICLASS):
            raise ConfigError(f"task must be 'binary' or 'multiclass', got {self.task!r}")
        if self.protocol not in (PROTOCOL_CV, PROTOCOL_HOLDOUT):
            raise ConfigError(f"protocol must be 'cv' or 'holdout', got {self.protocol!r}")
        if self.folds < 2:
            raise ConfigError(f"folds must be >= 2, got {self.folds}")
        if self.n_features is not None and self.n_features < 1:
            raise ConfigError("n_features must be >= 1")
        if not (1 <= self.k_min <= self.k_max):
            raise ConfigError(f"need 1 <= k_min <= k_max, got [{self.k_min}, {self.k_max}]")
        if self.k_step < 1:
            raise ConfigError("k_step must be >= 1")
        if not 0.0 < self.val_fraction < 1.0:
            raise ConfigError(f"val_fraction must be in (0, 1), got {self.val_fraction}")
        if self.format not in ("json", "text"):
            raise ConfigError(f"format must be 'json' or 'text', got {self.format!r}")

    def to_dict(self) -> dict:
        tp = self.train_params
        return {
            "input": self.input,
            "task": self.task,
            "protocol": self.protocol,
            "positive_class": self.positive_class,
            "folds": self.folds,
            "seed": self.seed,
            "n_features": self.n_features,
            "k_min": self.k_min,
            "k_max": self.k_max,
            "k_step": self.k_step,
            "val_fraction": self.val_fraction,
            "global_sweep": self.global_sweep,
            "out_dir": self.out_dir,
            "format": self.format,
            "train_params": {
                "eta": tp.eta,
                "rounds": tp.rounds,
                "max_depth": tp.max_depth,
                "reg_lambda": tp.reg_lambda,
                "gamma": tp.gamma,
                "min_child_weight": tp.min_child_weight,
                "seed": tp.seed,
            },
        }


def _load(config: RunConfig, table, encoding):
    if table is not None and encoding is not None:
        return table, encoding
    if config.input is None:
        raise ConfigError("no input dataset: set 'input' or pass a table")
    return load_feature_csv(config.input)


def resolve_positive_class(encoding: LabelEncoding, requested: str | None) -> int:
    """Positive-class id: the requested name, else a name containing 'covid'
    (case-insensitive), else class 0."""
    if requested is not None:
        if requested not in encoding.mapping:
            raise ConfigError(
                f"positive class {requested!r} not among classes {list(encoding.classes)}"
            )
        return encoding.mapping[requested]
    for name, idx in encoding.mapping.items():
        if "covid" in name.lower():
            return idx
    return 0


def _objective_for(task: str, n_classes: int) -> ObjectiveSpec:
    if task == TASK_BINARY:
        if n_classes != 2:
            raise DataError(f"binary task needs exactly 2 classes, dataset has {n_classes}")
        return ObjectiveSpec(kind=BINARY_LOGISTIC, n_classes=2)
    return ObjectiveSpec(kind=SOFTMAX, n_classes=max(n_classes, 2))


def _check_classes_present(labels: np.ndarray, rows: np.ndarray, n_classes: int, where: str) -> None:
    present = np.unique(labels[rows])
    if present.shape[0] != n_classes:
        missing = sorted(set(range(n_classes)) - set(present.tolist()))
        raise DataError(f"stratification error: classes {missing} missing from {where}")


def _grid(config: RunConfig, d: int) -> list[int]:
    if config.k_max > d:
        raise ConfigError(f"sweep grid [{config.k_min}, {config.k_max}] exceeds {d} features")
    return list(range(config.k_min, config.k_max + 1, config.k_step))


def _accuracy(y_true: np.ndarray, y_pred: np.ndarray) -> float:
    return float(np.mean(y_true == y_pred))


def sweep_feature_count(
    table: FeatureTable,
    train_rows: np.ndarray,
    objective: ObjectiveSpec,
    config: RunConfig,
    hooks: Hooks | None = None,
    fold: int | None = None,
) -> tuple[int, list[tuple[int, float]]]:
    """Pick the best top-k count on a validation carve of ``train_rows``.

    Scores come from the sweep-training part only; the returned curve lists
    (k, validation accuracy) for the whole grid.
    """
    grid = _grid(config, table.n_features)
    labels = table.labels
    sweep_train, sweep_val = train_val_split(
        train_rows, labels, config.val_fraction, config.seed
    )
    n_classes = objective.n_classes
    _check_classes_present(labels, sweep_val, n_classes, "the sweep validation split")
    _check_classes_present(labels, sweep_train, n_classes, "the sweep training split")
    if hooks:
        hooks("sweep_carve", {"fold": fold, "train_rows": sweep_train, "val_rows": sweep_val})
        hooks("sweep_scores", {"fold": fold, "rows": sweep_train})

    sub = FeatureTable(
        values=table.values[sweep_train],
        labels=labels[sweep_train],
        feature_names=table.feature_names,
    )
    ranking = f_scores(sub).ranking
    X_train = table.values[sweep_train]
    X_val = table.values[sweep_val]
    y_train = labels[sweep_train]
    y_val = labels[sweep_val]

    best_k: int | None = None
    best_acc = -1.0
    curve: list[tuple[int, float]] = []
    for k in grid:
        cols = np.sort(ranking[:k])  # same column-order convention as the folds
        model = train(X_train[:, cols], objective, config.train_params, labels=y_train)
        acc = _accuracy(y_val, model.predict_class(X_val[:, cols]))
        curve.append((k, acc))
        if hooks:
            hooks("sweep_point", {"fold": fold, "k": k, "accuracy": acc})
        if acc > best_acc:
            best_acc = acc
            best_k = k
    assert best_k is not None
    return best_k, curve


@dataclass(frozen=True)
class SweepResult:
    """Standalone sweep output: the chosen k and the full accuracy curve."""

    schema_version: int
    config: dict
    best_k: int
    curve: list[tuple[int, float]]

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "config": self.config,
            "best_k": self.best_k,
            "curve": [{"k": k, "val_accuracy": acc} for k, acc in self.curve],
        }


def run_sweep(
    config: RunConfig,
    table: FeatureTable | None = None,
    encoding: LabelEncoding | None = None,
    hooks: Hooks | None = None,
) -> SweepResult:
    """Feature-count sweep over the whole input dataset."""
    table, encoding = _load(config, table, encoding)
    objective = _objective_for(config.task, encoding.n_classes)
    best_k, curve = sweep_feature_count(
        table, np.arange(table.n_samples), objective, config, hooks=hooks
    )
    return SweepResult(
        schema_version=REPORT_SCHEMA_VERSION,
        config=config.to_dict(),
        best_k=best_k,
        curve=curve,
    )


@dataclass(frozen=True)
class FoldResult:
    fold: int
    n_features: int
    selected: list[int]
    confusion: list[list[int]]
    metrics: dict

    def to_dict(self) -> dict:
        return {
            "fold": self.fold,
            "n_features": self.n_features,
            "selected": list(self.selected),
            "confusion": [list(row) for row in self.confusion],
            "metrics": _metrics_group_to_dict(self.metrics),
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "FoldResult":
        return cls(
            fold=payload["fold"],
            n_features=payload["n_features"],
            selected=list(payload["selected"]),
            confusion=[list(row) for row in payload["confusion"]],
            metrics=_metrics_group_from_dict(payload["metrics"]),
        )


def _metrics_group_to_dict(group: dict) -> dict:
    out = {}
    for key, value in group.items():
        if isinstance(value, list):
            out[key] = [r.to_dict() for r in value]
        else:
            out[key] = value.to_dict()
    return out


def _metrics_group_from_dict(payload: dict) -> dict:
    out = {}
    for key, value in payload.items():
        if isinstance(value, list):
            out[key] = [MetricsReport.from_dict(v) for v in value]
        else:
            out[key] = MetricsReport.from_dict(value)
    return out


@dataclass(frozen=True)
class CVReport:
    """Per-fold and aggregate results of one cv/holdout run."""

    schema_version: int
    config: dict
    dataset: dict
    positive_class: dict
    n_folds: int
    folds: list[FoldResult]
    fold_average: dict
    overlapped: list[list[int]]
    pooled: dict
    sweep: dict
    timings: dict

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "config": self.config,
            "dataset": self.dataset,
            "positive_class": self.positive_class,
            "n_folds": self.n_folds,
            "folds": [f.to_dict() for f in self.folds],
            "fold_average": _metrics_group_to_dict(self.fold_average),
            "overlapped": [list(row) for row in self.overlapped],
            "pooled": _metrics_group_to_dict(self.pooled),
            "sweep": self.sweep,
            "timings": self.timings,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "CVReport":
        version = payload.get("schema_version")
        if version != REPORT_SCHEMA_VERSION:
            raise SchemaError(f"unsupported report schema version {version!r}")
        return cls(
            schema_version=version,
            config=payload["config"],
            dataset=payload["dataset"],
            positive_class=payload["positive_class"],
            n_folds=payload["n_folds"],
            folds=[FoldResult.from_dict(f) for f in payload["folds"]],
            fold_average=_metrics_group_from_dict(payload["fold_average"]),
            overlapped=[list(row) for row in payload["overlapped"]],
            pooled=_metrics_group_from_dict(payload["pooled"]),
            sweep=payload["sweep"],
            timings=payload["timings"],
        )


def _fold_metrics(cm: np.ndarray, task: str, positive: int) -> dict:
    if task == TASK_BINARY:
        return {"binary": binary_metrics(cm, positive)}
    per_class = per_class_metrics(cm)
    return {
        "positive": per_class[positive],
        "macro": macro_average(per_class),
        "per_class": per_class,
    }


def _average_metric_groups(groups: list[dict]) -> dict:
    out: dict = {}
    for key in groups[0]:
        values = [g[key] for g in groups]
        if isinstance(values[0], list):
            out[key] = [fold_average([v[c] for v in values]) for c in range(len(values[0]))]
        else:
            out[key] = fold_average(values)
    return out


def _select_for_fold(
    table: FeatureTable, train_rows: np.ndarray, n_keep: int, hooks: Hooks | None, fold: int
) -> np.ndarray:
    if hooks:
        hooks("fold_scores", {"fold": fold, "rows": train_rows})
    sub = FeatureTable(
        values=table.values[train_rows],
        labels=table.labels[train_rows],
        feature_names=table.feature_names,
    )
    _, selected = select_top_k(sub, f_scores(sub).ranking, n_keep)
    # ascending original order: keeps split tie-breaking independent of the
    # ranking permutation, so selecting all d features equals no selection
    return np.sort(selected)


def _evaluate_split(
    table: FeatureTable,
    train_rows: np.ndarray,
    test_rows: np.ndarray,
    objective: ObjectiveSpec,
    config: RunConfig,
    positive: int,
    fold: int,
    hooks: Hooks | None,
) -> FoldResult:
    labels = table.labels
    n_classes = objective.n_classes
    _check_classes_present(labels, train_rows, n_classes, f"fold {fold} training split")

    if config.n_features is not None:
        n_keep = config.n_features
    elif config.global_sweep:
        raise InvariantError("global sweep must be resolved before fold evaluation")
    else:
        n_keep, _ = sweep_feature_count(
            table, train_rows, objective, config, hooks=hooks, fold=fold
        )
    selected = _select_for_fold(table, train_rows, n_keep, hooks, fold)

    model = train(
        table.values[train_rows][:, selected],
        objective,
        config.train_params,
        labels=labels[train_rows],
    )
    y_pred = model.predict_class(table.values[test_rows][:, selected])
    if hooks:
        hooks("fold_eval", {"fold": fold, "test_rows": test_rows})
    cm = confusion(labels[test_rows], y_pred, n_classes)
    return FoldResult(
        fold=fold,
        n_features=int(n_keep),
        selected=[int(i) for i in selected],
        confusion=[[int(v) for v in row] for row in cm],
        metrics=_fold_metrics(cm, config.task, positive),
    )


def run_cv(
    config: RunConfig,
    table: FeatureTable | None = None,
    encoding: LabelEncoding | None = None,
    hooks: Hooks | None = None,
) -> CVReport:
    """Run the configured protocol and assemble the full report."""
    started = time.perf_counter()
    table, encoding = _load(config, table, encoding)
    labels = table.labels
    n_classes = encoding.n_classes
    objective = _objective_for(config.task, n_classes)
    positive = resolve_positive_class(encoding, config.positive_class)
    if config.n_features is not None and config.n_features > table.n_features:
        raise ConfigError(
            f"n_features={config.n_features} exceeds the {table.n_features} dataset features"
        )

    sweep_info: dict = {"mode": "fixed" if config.n_features is not None else "per-fold"}
    effective = config
    if config.n_features is None and config.global_sweep:
        sweep_info["mode"] = "global"
        best_k, _ = sweep_feature_count(
            table, np.arange(table.n_samples), objective, config, hooks=hooks
        )
        sweep_info["global_best_k"] = best_k
        effective = replace(config, n_features=best_k)

    splits: list[tuple[int, np.ndarray, np.ndarray]] = []
    if config.protocol == PROTOCOL_CV:
        plan = stratified_kfold(labels, config.folds, config.seed)
        for fold in range(config.folds):
            splits.append((fold, plan.train_indices(fold), plan.test_indices(fold)))
    else:
        train_rows, test_rows = train_val_split(
            np.arange(table.n_samples), labels, config.val_fraction, config.seed
        )
        splits.append((0, train_rows, test_rows))

    folds: list[FoldResult] = []
    per_fold_seconds: list[float] = []
    for fold, train_rows, test_rows in splits:
        fold_start = time.perf_counter()
        folds.append(
            _evaluate_split(
                table, train_rows, test_rows, objective, effective, positive, fold, hooks
            )
        )
        per_fold_seconds.append(time.perf_counter() - fold_start)

    overlapped = overlap([np.array(f.confusion) for f in folds])
    if config.protocol == PROTOCOL_CV and int(overlapped.sum()) != table.n_samples:
        raise InvariantError("overlapped confusion matrix total != dataset size")
    sweep_info["chosen_per_fold"] = [f.n_features for f in folds]

    report = CVReport(
        schema_version=REPORT_SCHEMA_VERSION,
        config=config.to_dict(),
        dataset={
            "n_samples": table.n_samples,
            "n_features": table.n_features,
            "classes": list(encoding.classes),
            "class_counts": [int(c) for c in np.bincount(labels, minlength=n_classes)],
        },
        positive_class={"name": encoding.classes[positive], "id": positive},
        n_folds=len(folds),
        folds=folds,
        fold_average=_average_metric_groups([f.metrics for f in folds]),
        overlapped=[[int(v) for v in row] for row in overlapped],
        pooled=_fold_metrics(overlapped, config.task, positive),
        sweep=sweep_info,
        timings={
            "total_seconds": time.perf_counter() - started,
            "per_fold_seconds": per_fold_seconds,
        },
    )
    return report


def render_report_json(report: CVReport) -> str:
    return json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n"


def render_report_text(report: CVReport) -> str:
    cfg = report.config
    lines = [
        f"Run report (schema {report.schema_version})",
        f"Task: {cfg['task']}  Protocol: {cfg['protocol']}  "
        f"Folds: {report.n_folds}  Seed: {cfg['seed']}",
        "Dataset: {n} samples x {d} features; classes: {cls}".format(
            n=report.dataset["n_samples"],
            d=report.dataset["n_features"],
            cls=", ".join(
                f"{name} ({count})"
                for name, count in zip(report.dataset["classes"], report.dataset["class_counts"])
            ),
        ),
        f"Positive class: {report.positive_class['name']} (id {report.positive_class['id']})",
        f"Selected feature counts per fold: {[f.n_features for f in report.folds]}",
        "",
    ]
    fold_reports = [f.metrics for f in report.folds]
    for key in fold_reports[0]:
        if isinstance(fold_reports[0][key], list):
            continue
        lines.append(f"Metrics (%), aggregation '{key}':")
        lines.append(
            metrics_table_text([m[key] for m in fold_reports], report.fold_average[key]).rstrip()
        )
        lines.append("")

    class_names = report.dataset["classes"]
    width = max(len(str(n)) for n in class_names + [str(v) for row in report.overlapped for v in row])
    lines.append("Overlapped confusion matrix (rows true, columns predicted):")
    header = " " * (width + 2) + "  ".join(str(n).rjust(width) for n in class_names)
    lines.append(header)
    for name, row in zip(class_names, report.overlapped):
        lines.append(
            str(name).rjust(width + 2) + "  ".join(str(v).rjust(width) for v in row)
        )
    lines.append("")
    lines.append("Pooled metrics (%) from the overlapped matrix:")
    pooled_cols = []
    for key, value in report.pooled.items():
        if isinstance(value, list):
            pooled_cols.extend((f"class {class_names[i]}", r) for i, r in enumerate(value))
        else:
            pooled_cols.append((key, value))
    lines.append(reports_table(pooled_cols).rstrip())
    lines.append("")
    return "\n".join(lines)


def emit_report(report: CVReport, fmt: str, out_dir: str | Path, stem: str = "report") -> Path:
    """Write the report as ``<stem>.json`` or ``<stem>.txt`` under ``out_dir``."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if fmt == "json":
        path = out_dir / f"{stem}.json"
        path.write_text(render_report_json(report), encoding="utf-8")
    elif fmt == "text":
        path = out_dir / f"{stem}.txt"
        path.write_text(render_report_text(report), encoding="utf-8")
    else:
        raise ConfigError(f"unknown report format {fmt!r}")
    return path


def load_report(path: str | Path) -> CVReport:
    path = Path(path)
    if not path.exists():
        raise SchemaError(f"no such report file: {path}")
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON: {exc}") from exc
    return CVReport.from_dict(payload)


def run_train(
    config: RunConfig,
    table: FeatureTable | None = None,
    encoding: LabelEncoding | None = None,
) -> tuple[Path, Path]:
    """Fit on the full dataset; persist model + selection artifacts.

    The selection file records the chosen original-space feature indices,
    their names (prediction-time projection is name-driven), and the label
    encoding.
    """
    table, encoding = _load(config, table, encoding)
    objective = _objective_for(config.task, encoding.n_classes)
    if config.out_dir is None:
        raise ConfigError("train needs an out_dir for the model and selection files")
    if config.n_features is not None:
        if config.n_features > table.n_features:
            raise ConfigError(
                f"n_features={config.n_features} exceeds the {table.n_features} dataset features"
            )
        n_keep = config.n_features
    else:
        n_keep, _ = sweep_feature_count(
            table, np.arange(table.n_samples), objective, config
        )
    _, selected = select_top_k(table, f_scores(table).ranking, n_keep)
    selected = np.sort(selected)  # ascending original order, as in the folds
    model = train(
        table.values[:, selected], objective, config.train_params, labels=table.labels
    )

    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    model_path = out_dir / "model.json"
    save_model(model, model_path)
    selection_path = out_dir / "selection.json"
    selection = {
        "schema_version": SELECTION_SCHEMA_VERSION,
        "classes": list(encoding.classes),
        "selected_indices": [int(i) for i in selected],
        "feature_names": [table.feature_names[i] for i in selected],
    }
    selection_path.write_text(
        json.dumps(selection, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )
    return model_path, selection_path


def load_selection(path: str | Path) -> dict:
    path = Path(path)
    if not path.exists():
        raise SchemaError(f"no such selection file: {path}")
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(payload, dict) or payload.get("schema_version") != SELECTION_SCHEMA_VERSION:
        raise SchemaError(f"{path}: unsupported selection schema")
    for key in ("classes", "feature_names"):
        if key not in payload or not isinstance(payload[key], list):
            raise SchemaError(f"{path}: missing or malformed {key!r}")
    return payload


def _read_named_columns(csv_path: str | Path, names: Sequence[str]) -> np.ndarray:
    """Lenient reader for prediction inputs: projects the named feature
    columns (any order, extra columns ignored, label optional)."""
    import csv as _csv

    csv_path = Path(csv_path)
    if not csv_path.exists():
        raise DataError(f"no such file: {csv_path}")
    with csv_path.open(newline="", encoding="utf-8") as fh:
        reader = _csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{csv_path}: empty file") from None
        position = {name: i for i, name in enumerate(header)}
        missing = [name for name in names if name not in position]
        if missing:
            raise DataError(f"{csv_path}: missing feature columns {missing}")
        cols = [position[name] for name in names]
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise DataError(
                    f"{csv_path}: line {lineno}: expected {len(header)} cells, got {len(row)}"
                )
            try:
                parsed = [float(row[c]) for c in cols]
            except ValueError:
                raise DataError(f"{csv_path}: line {lineno}: non-numeric feature cell") from None
            rows.append(parsed)
    matrix = np.array(rows, dtype=np.float64).reshape(len(rows), len(names))
    if rows and not np.isfinite(matrix).all():
        bad = np.argwhere(~np.isfinite(matrix))[0]
        raise DataError(
            f"{csv_path}: non-finite value in column {names[bad[1]]!r} (data row {bad[0]})"
        )
    return matrix


def run_predict(
    model_path: str | Path,
    selection_path: str | Path,
    csv_path: str | Path,
    out_path: str | Path,
) -> Path:
    """Predict a CSV of features; emits ``row,predicted_label,proba_*`` rows."""
    import csv as _csv

    model = load_model(model_path)
    selection = load_selection(selection_path)
    names = selection["feature_names"]
    classes = selection["classes"]
    if model.n_features_expected != len(names):
        raise SchemaError(
            f"model expects {model.n_features_expected} features but the selection "
            f"file lists {len(names)}"
        )
    X = _read_named_columns(csv_path, names)
    out_path = Path(out_path)
    header = ["row", "predicted_label"] + [f"proba_{c}" for c in range(len(classes))]
    with out_path.open("w", newline="", encoding="utf-8") as fh:
        writer = _csv.writer(fh)
        writer.writerow(header)
        if X.shape[0]:
            proba = model.predict_proba(X)
            pred = np.argmax(proba, axis=1)
            for i in range(X.shape[0]):
                writer.writerow(
                    [i, classes[int(pred[i])]] + [repr(float(p)) for p in proba[i]]
                )
    return out_path


def run_evaluate(
    model_path: str | Path,
    selection_path: str | Path,
    csv_path: str | Path,
    positive_class: str | None = None,
) -> dict:
    """Score a labeled CSV against persisted artifacts; returns a plain dict."""
    model = load_model(model_path)
    selection = load_selection(selection_path)
    table, encoding = load_feature_csv(csv_path)
    if list(encoding.classes) != list(selection["classes"]):
        raise DataError(
            f"label classes {list(encoding.classes)} do not match the trained "
            f"classes {selection['classes']}"
        )
    name_to_col = {name: i for i, name in enumerate(table.feature_names)}
    missing = [n for n in selection["feature_names"] if n not in name_to_col]
    if missing:
        raise DataError(f"{csv_path}: missing feature columns {missing}")
    cols = [name_to_col[n] for n in selection["feature_names"]]
    y_pred = model.predict_class(table.values[:, cols])
    n_classes = encoding.n_classes
    cm = confusion(table.labels, y_pred, n_classes)
    positive = resolve_positive_class(encoding, positive_class)
    task = TASK_BINARY if n_classes == 2 else TASK_MULTICLASS
    return {
        "schema_version": REPORT_SCHEMA_VERSION,
        "n_samples": table.n_samples,
        "classes": list(encoding.classes),
        "positive_class": {"name": encoding.classes[positive], "id": positive},
        "confusion": [[int(v) for v in row] for row in cm],
        "metrics": _metrics_group_to_dict(_fold_metrics(cm, task, positive)),
    }


def run_select(
    config: RunConfig,
    scores_out: str | Path | None = None,
    selection_out: str | Path | None = None,
    table: FeatureTable | None = None,
    encoding: LabelEncoding | None = None,
) -> dict:
    """Score all features on the full dataset; optionally dump artifacts."""
    table, encoding = _load(config, table, encoding)
    scores = f_scores(table)
    if scores_out is not None:
        save_scores_csv(scores, scores_out, feature_names=table.feature_names)
    result = {
        "n_features": table.n_features,
        "ranking": [int(i) for i in scores.ranking],
    }
    if config.n_features is not None:
        _, selected = select_top_k(table, scores.ranking, config.n_features)
        selected = np.sort(selected)
        result["selected_indices"] = [int(i) for i in selected]
        if selection_out is not None:
            payload = {
                "schema_version": SELECTION_SCHEMA_VERSION,
                "classes": list(encoding.classes),
                "selected_indices": [int(i) for i in selected],
                "feature_names": [table.feature_names[i] for i in selected],
            }
            Path(selection_out).write_text(
                json.dumps(payload, sort_keys=True, indent=2) + "\n", encoding="utf-8"
            )
    return result
