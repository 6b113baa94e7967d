"""Training objectives: per-sample loss plus first/second derivatives.

Classification uses binary-logistic or softmax losses; a squared-error
objective is included as a regression-style harness (it is its own exact
second-order expansion, which makes boosting-step behaviour easy to reason
about in tests and demos). Everything is computed in numerically stable
forms: logaddexp for the logistic loss, max-subtraction for softmax.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

BINARY_LOGISTIC = "binary-logistic"
SOFTMAX = "softmax"
SQUARED_ERROR = "squared-error"

_KINDS = (BINARY_LOGISTIC, SOFTMAX, SQUARED_ERROR)


@dataclass(frozen=True)
class ObjectiveSpec:
    """Which loss to boost and how many classes it distinguishes.

    ``squared-error`` is a single-output regression harness; ``n_classes``
    is fixed at 1 for it.
    """

    kind: str
    n_classes: int = 2

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown objective kind {self.kind!r}")
        if self.kind == BINARY_LOGISTIC and self.n_classes != 2:
            raise ValueError("binary-logistic requires n_classes == 2")
        if self.kind == SOFTMAX and self.n_classes < 2:
            raise ValueError("softmax requires n_classes >= 2")
        if self.kind == SQUARED_ERROR and self.n_classes != 1:
            raise ValueError("squared-error is single-output (n_classes == 1)")

    @property
    def n_outputs(self) -> int:
        """Width of the raw-score matrix: 1, except one column per softmax class."""
        return self.n_classes if self.kind == SOFTMAX else 1


def sigmoid(x: np.ndarray) -> np.ndarray:
    """Logistic function, overflow-safe for any finite input."""
    out = np.empty_like(x, dtype=np.float64)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def softmax(scores: np.ndarray) -> np.ndarray:
    """Row-wise softmax with max subtraction; rows sum to 1."""
    shifted = scores - scores.max(axis=1, keepdims=True)
    ex = np.exp(shifted)
    return ex / ex.sum(axis=1, keepdims=True)


def _check_shapes(objective: ObjectiveSpec, labels: np.ndarray, raw_scores: np.ndarray) -> None:
    if raw_scores.ndim != 2 or raw_scores.shape[1] != objective.n_outputs:
        raise ValueError(
            f"raw_scores must be n x {objective.n_outputs} for {objective.kind}, "
            f"got shape {raw_scores.shape}"
        )
    if labels.shape != (raw_scores.shape[0],):
        raise ValueError("labels must be a vector aligned with raw_scores rows")
    if objective.kind != SQUARED_ERROR:
        if labels.min(initial=0) < 0 or labels.max(initial=0) >= objective.n_classes:
            raise ValueError(f"label out of range for {objective.n_classes} classes")


def grad_hess(
    objective: ObjectiveSpec, labels: np.ndarray, raw_scores: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """First and second derivatives of the loss at the current raw scores.

    Binary logistic: g = p - y, h = p(1-p) with p = sigmoid(score).
    Softmax: per class c, g_c = p_c - [y == c], h_c = p_c(1 - p_c).
    Squared error: g = score - target, h = 1.
    """
    labels = np.asarray(labels)
    raw_scores = np.asarray(raw_scores, dtype=np.float64)
    _check_shapes(objective, labels, raw_scores)

    if objective.kind == BINARY_LOGISTIC:
        p = sigmoid(raw_scores[:, 0])
        g = p - labels.astype(np.float64)
        h = p * (1.0 - p)
        return g[:, None], h[:, None]

    if objective.kind == SOFTMAX:
        p = softmax(raw_scores)
        g = p.copy()
        g[np.arange(labels.shape[0]), labels.astype(np.int64)] -= 1.0
        h = p * (1.0 - p)
        return g, h

    g = raw_scores[:, 0] - labels.astype(np.float64)
    return g[:, None], np.ones_like(g)[:, None]


def loss_values(
    objective: ObjectiveSpec, labels: np.ndarray, raw_scores: np.ndarray
) -> np.ndarray:
    """Per-sample loss; the derivatives above are its exact first/second derivatives."""
    labels = np.asarray(labels)
    raw_scores = np.asarray(raw_scores, dtype=np.float64)
    _check_shapes(objective, labels, raw_scores)

    if objective.kind == BINARY_LOGISTIC:
        z = raw_scores[:, 0]
        return np.logaddexp(0.0, z) - labels.astype(np.float64) * z

    if objective.kind == SOFTMAX:
        m = raw_scores.max(axis=1)
        lse = m + np.log(np.exp(raw_scores - m[:, None]).sum(axis=1))
        picked = raw_scores[np.arange(labels.shape[0]), labels.astype(np.int64)]
        return lse - picked

    return 0.5 * (labels.astype(np.float64) - raw_scores[:, 0]) ** 2
