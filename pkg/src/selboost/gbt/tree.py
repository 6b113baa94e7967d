"""Regression trees grown on first/second derivatives (exact greedy search).

Each node split maximises the closed-form gain

    0.5 * [G_L^2/(H_L+lambda) + G_R^2/(H_R+lambda) - (G_L+G_R)^2/(H_L+H_R+lambda)] - gamma

over every feature and every midpoint between consecutive distinct sorted
values, where G/H are sums of the first/second derivatives over the
candidate children. A leaf's weight is -G/(H+lambda). Samples route left
when x[feature] < threshold, strictly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import SchemaError

# Guards the w* and gain denominators when lambda == 0 and a child's
# hessian sum underflows to zero (saturated leaves).
_H_FLOOR = 1e-16


@dataclass(frozen=True)
class Split:
    feature: int
    threshold: float
    gain: float


def best_split(
    X: np.ndarray,
    g: np.ndarray,
    h: np.ndarray,
    reg_lambda: float,
    gamma: float,
    min_child_weight: float,
) -> Split | None:
    """Exhaustive scan for the maximal-gain split of one node.

    Returns None when no candidate has positive gain and hessian sums of at
    least ``min_child_weight`` on both sides. Ties break to the lower
    feature index, then the lower threshold.
    """
    m, d = X.shape
    if m < 2:
        return None
    g_total = g.sum()
    h_total = h.sum()
    parent_score = g_total * g_total / max(h_total + reg_lambda, _H_FLOOR)

    best: Split | None = None
    for j in range(d):
        order = np.argsort(X[:, j], kind="stable")
        xs = X[order, j]
        cuts = np.nonzero(xs[:-1] < xs[1:])[0]
        if cuts.size == 0:
            continue
        g_left = np.cumsum(g[order])[cuts]
        h_left = np.cumsum(h[order])[cuts]
        g_right = g_total - g_left
        h_right = h_total - h_left
        gains = (
            0.5
            * (
                g_left * g_left / np.maximum(h_left + reg_lambda, _H_FLOOR)
                + g_right * g_right / np.maximum(h_right + reg_lambda, _H_FLOOR)
                - parent_score
            )
            - gamma
        )
        valid = (h_left >= min_child_weight) & (h_right >= min_child_weight) & (gains > 0.0)
        if not valid.any():
            continue
        gains = np.where(valid, gains, -np.inf)
        pick = int(np.argmax(gains))  # first max = lowest threshold (cuts ascend)
        if best is None or gains[pick] > best.gain:
            cut = cuts[pick]
            threshold = (xs[cut] + xs[cut + 1]) / 2.0  # midpoint of the cut pair
            best = Split(feature=j, threshold=float(threshold), gain=float(gains[pick]))
    return best


def leaf_weight(g_sum: float, h_sum: float, reg_lambda: float) -> float:
    """Optimal raw-score increment for a leaf: -G / (H + lambda)."""
    return -g_sum / max(h_sum + reg_lambda, _H_FLOOR)


@dataclass(frozen=True)
class Tree:
    """Flat binary tree: internal nodes carry (feature, threshold, children),
    leaves carry a raw-score weight. Node 0 is the root; child indices of -1
    mark leaves. Layout is preorder (left subtree before right)."""

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    weight: np.ndarray
    _leaf_mask: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_leaf_mask", self.left < 0)

    @property
    def n_nodes(self) -> int:
        return self.feature.shape[0]

    def apply(self, X: np.ndarray) -> np.ndarray:
        """Raw (unscaled) leaf weight reached by every row of X."""
        idx = np.zeros(X.shape[0], dtype=np.int64)
        active = np.nonzero(~self._leaf_mask[idx])[0]
        while active.size:
            at = idx[active]
            go_left = X[active, self.feature[at]] < self.threshold[at]
            idx[active] = np.where(go_left, self.left[at], self.right[at])
            active = active[~self._leaf_mask[idx[active]]]
        return self.weight[idx]

    def to_nodes(self) -> list[dict]:
        nodes = []
        for i in range(self.n_nodes):
            if self.left[i] < 0:
                nodes.append({"leaf_weight": float(self.weight[i])})
            else:
                nodes.append(
                    {
                        "feature": int(self.feature[i]),
                        "threshold": float(self.threshold[i]),
                        "left": int(self.left[i]),
                        "right": int(self.right[i]),
                    }
                )
        return nodes

    @classmethod
    def from_nodes(cls, nodes: list[dict]) -> "Tree":
        n = len(nodes)
        if n == 0:
            raise SchemaError("tree has no nodes")
        feature = np.full(n, -1, dtype=np.int64)
        threshold = np.zeros(n, dtype=np.float64)
        left = np.full(n, -1, dtype=np.int64)
        right = np.full(n, -1, dtype=np.int64)
        weight = np.zeros(n, dtype=np.float64)
        for i, node in enumerate(nodes):
            if "leaf_weight" in node:
                weight[i] = float(node["leaf_weight"])
            else:
                try:
                    feature[i] = int(node["feature"])
                    threshold[i] = float(node["threshold"])
                    left[i] = int(node["left"])
                    right[i] = int(node["right"])
                except KeyError as exc:
                    raise SchemaError(f"node {i} missing field {exc.args[0]!r}") from None
        tree = cls(feature=feature, threshold=threshold, left=left, right=right, weight=weight)
        tree.validate()
        return tree

    def validate(self) -> None:
        """Check the node array encodes one proper binary tree rooted at 0."""
        n = self.n_nodes
        seen = np.zeros(n, dtype=bool)
        stack = [0]
        while stack:
            i = stack.pop()
            if i < 0 or i >= n:
                raise SchemaError(f"child index {i} out of range (tree has {n} nodes)")
            if seen[i]:
                raise SchemaError(f"node {i} reached twice (cycle or shared subtree)")
            seen[i] = True
            if self.left[i] >= 0 or self.right[i] >= 0:
                if self.left[i] < 0 or self.right[i] < 0:
                    raise SchemaError(f"internal node {i} must have both children")
                stack.append(int(self.right[i]))
                stack.append(int(self.left[i]))
        if not seen.all():
            orphan = int(np.nonzero(~seen)[0][0])
            raise SchemaError(f"node {orphan} unreachable from the root")


def build_tree(
    X: np.ndarray,
    g: np.ndarray,
    h: np.ndarray,
    max_depth: int,
    reg_lambda: float,
    gamma: float,
    min_child_weight: float,
) -> Tree:
    """Depth-first recursive growth; deterministic for fixed inputs."""
    features: list[int] = []
    thresholds: list[float] = []
    lefts: list[int] = []
    rights: list[int] = []
    weights: list[float] = []

    def new_node() -> int:
        features.append(-1)
        thresholds.append(0.0)
        lefts.append(-1)
        rights.append(-1)
        weights.append(0.0)
        return len(features) - 1

    def grow(rows: np.ndarray, depth: int) -> int:
        node = new_node()
        split = None
        if depth < max_depth and rows.shape[0] >= 2:
            split = best_split(
                X[rows], g[rows], h[rows], reg_lambda, gamma, min_child_weight
            )
        if split is None:
            weights[node] = leaf_weight(g[rows].sum(), h[rows].sum(), reg_lambda)
            return node
        go_left = X[rows, split.feature] < split.threshold
        features[node] = split.feature
        thresholds[node] = split.threshold
        lefts[node] = grow(rows[go_left], depth + 1)
        rights[node] = grow(rows[~go_left], depth + 1)
        return node

    grow(np.arange(X.shape[0]), 0)
    return Tree(
        feature=np.array(features, dtype=np.int64),
        threshold=np.array(thresholds, dtype=np.float64),
        left=np.array(lefts, dtype=np.int64),
        right=np.array(rights, dtype=np.int64),
        weight=np.array(weights, dtype=np.float64),
    )
