"""Boosted forest: training loop, prediction, and JSON persistence.

Training adds one tree per round (binary / squared-error) or one tree per
class per round (softmax, fit one-vs-rest on that class's derivative
columns). Leaf weights are stored unscaled; the learning rate is applied
when scores are accumulated, and is recorded in the model so serialization
round-trips bit-exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from ..dataset import FeatureTable
from ..errors import SchemaError
from .objectives import (
    BINARY_LOGISTIC,
    SQUARED_ERROR,
    ObjectiveSpec,
    grad_hess,
    sigmoid,
    softmax,
)
from .tree import Tree, build_tree

MODEL_SCHEMA_VERSION = 1


@dataclass(frozen=True)
class TrainParams:
    """Boosting hyperparameters.

    ``seed`` is carried for reproducibility bookkeeping only: training uses
    no randomness (exact greedy splits, no subsampling).
    """

    eta: float = 0.3
    rounds: int = 100
    max_depth: int = 6
    reg_lambda: float = 1.0
    gamma: float = 0.0
    min_child_weight: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.eta <= 1.0:
            raise ValueError(f"eta must be in (0, 1], got {self.eta}")
        if self.rounds < 1:
            raise ValueError(f"rounds must be >= 1, got {self.rounds}")
        if self.max_depth < 1:
            raise ValueError(f"max_depth must be >= 1, got {self.max_depth}")
        if self.reg_lambda < 0 or self.gamma < 0 or self.min_child_weight < 0:
            raise ValueError("reg_lambda, gamma and min_child_weight must be >= 0")


def _as_matrix(data) -> np.ndarray:
    values = data.values if isinstance(data, FeatureTable) else data
    X = np.asarray(values, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError(f"expected an n x d matrix, got shape {X.shape}")
    return X


@dataclass(frozen=True)
class GBTModel:
    """Trained forest; immutable, safe to share across threads."""

    objective: ObjectiveSpec
    base_score: float
    eta: float
    trees: tuple[Tree, ...]
    n_features_expected: int

    @property
    def rounds(self) -> int:
        return len(self.trees) // self.objective.n_outputs

    def predict_raw(self, data) -> np.ndarray:
        """base_score plus the eta-weighted sum of tree outputs, n x n_outputs."""
        X = _as_matrix(data)
        if X.shape[1] != self.n_features_expected:
            raise ValueError(
                f"model expects {self.n_features_expected} features, got {X.shape[1]}"
            )
        n_out = self.objective.n_outputs
        raw = np.full((X.shape[0], n_out), self.base_score, dtype=np.float64)
        for t, tree in enumerate(self.trees):
            raw[:, t % n_out] += self.eta * tree.apply(X)
        return raw

    def predict_proba(self, data) -> np.ndarray:
        """n x K class probabilities; rows sum to one."""
        if self.objective.kind == SQUARED_ERROR:
            raise ValueError("squared-error models have no class probabilities")
        raw = self.predict_raw(data)
        if self.objective.kind == BINARY_LOGISTIC:
            p1 = sigmoid(raw[:, 0])
            return np.column_stack([1.0 - p1, p1])
        return softmax(raw)

    def predict_class(self, data) -> np.ndarray:
        """argmax of the class probabilities; ties go to the smallest class id."""
        return np.argmax(self.predict_proba(data), axis=1).astype(np.int64)

    def to_dict(self) -> dict:
        return {
            "schema_version": MODEL_SCHEMA_VERSION,
            "objective": self.objective.kind,
            "n_classes": self.objective.n_classes,
            "base_score": self.base_score,
            "eta": self.eta,
            "n_features_expected": self.n_features_expected,
            "trees": [{"nodes": tree.to_nodes()} for tree in self.trees],
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "GBTModel":
        try:
            version = payload["schema_version"]
            if version != MODEL_SCHEMA_VERSION:
                raise SchemaError(
                    f"unsupported model schema version {version!r} "
                    f"(this build reads version {MODEL_SCHEMA_VERSION})"
                )
            objective = ObjectiveSpec(
                kind=payload["objective"],
                n_classes=int(payload["n_classes"]),
            )
            trees = tuple(Tree.from_nodes(entry["nodes"]) for entry in payload["trees"])
            model = cls(
                objective=objective,
                base_score=float(payload["base_score"]),
                eta=float(payload["eta"]),
                trees=trees,
                n_features_expected=int(payload["n_features_expected"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"malformed model file: {exc}") from exc
        if len(model.trees) % model.objective.n_outputs != 0:
            raise SchemaError("tree count is not a multiple of the output width")
        return model


def train(
    table: FeatureTable | np.ndarray,
    objective: ObjectiveSpec,
    params: TrainParams,
    labels: Sequence | None = None,
) -> GBTModel:
    """Boost ``params.rounds`` rounds from a raw base score of zero.

    ``labels`` defaults to the table's own labels; pass explicit (float)
    targets when training the squared-error harness on a bare matrix.
    """
    X = _as_matrix(table)
    if labels is None:
        if not isinstance(table, FeatureTable):
            raise ValueError("labels are required when training on a bare matrix")
        labels = table.labels
    y = np.asarray(labels)
    if X.shape[0] < 1:
        raise ValueError("cannot train on an empty table")
    if y.shape != (X.shape[0],):
        raise ValueError("labels must align with the rows of the table")

    base_score = 0.0
    n_out = objective.n_outputs
    raw = np.full((X.shape[0], n_out), base_score, dtype=np.float64)
    trees: list[Tree] = []
    for _ in range(params.rounds):
        g, h = grad_hess(objective, y, raw)
        for c in range(n_out):
            tree = build_tree(
                X,
                g[:, c],
                h[:, c],
                max_depth=params.max_depth,
                reg_lambda=params.reg_lambda,
                gamma=params.gamma,
                min_child_weight=params.min_child_weight,
            )
            trees.append(tree)
            raw[:, c] += params.eta * tree.apply(X)
    return GBTModel(
        objective=objective,
        base_score=base_score,
        eta=params.eta,
        trees=tuple(trees),
        n_features_expected=X.shape[1],
    )


def model_to_json(model: GBTModel) -> str:
    """Canonical JSON text: sorted keys, no whitespace, repr-exact floats."""
    return json.dumps(model.to_dict(), sort_keys=True, separators=(",", ":"))


def save_model(model: GBTModel, path: str | Path) -> None:
    Path(path).write_text(model_to_json(model), encoding="utf-8")


def load_model(path: str | Path) -> GBTModel:
    path = Path(path)
    if not path.exists():
        raise SchemaError(f"no such model file: {path}")
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise SchemaError(f"{path}: expected a JSON object at top level")
    return GBTModel.from_dict(payload)
