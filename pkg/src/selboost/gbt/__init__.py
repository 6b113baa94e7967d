"""Second-order gradient-boosted decision trees, built from scratch."""

from .model import (
    MODEL_SCHEMA_VERSION,
    GBTModel,
    TrainParams,
    load_model,
    model_to_json,
    save_model,
    train,
)
from .objectives import (
    BINARY_LOGISTIC,
    SOFTMAX,
    SQUARED_ERROR,
    ObjectiveSpec,
    grad_hess,
    loss_values,
    sigmoid,
    softmax,
)
from .tree import Split, Tree, best_split, build_tree, leaf_weight

__all__ = [
    "MODEL_SCHEMA_VERSION",
    "GBTModel",
    "TrainParams",
    "load_model",
    "model_to_json",
    "save_model",
    "train",
    "BINARY_LOGISTIC",
    "SOFTMAX",
    "SQUARED_ERROR",
    "ObjectiveSpec",
    "grad_hess",
    "loss_values",
    "sigmoid",
    "softmax",
    "Split",
    "Tree",
    "best_split",
    "build_tree",
    "leaf_weight",
]
