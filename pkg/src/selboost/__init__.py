"""selboost: ANOVA F-test feature selection feeding second-order
gradient-boosted trees, with a stratified cross-validation harness and the
standard classification metric bundle."""

from .anova import FScoreTable, f_scores, rank_features, rank_order, select_top_k
from .dataset import (
    FeatureTable,
    LabelEncoding,
    SplitPlan,
    encode_labels,
    load_feature_csv,
    save_feature_csv,
    stratified_kfold,
    train_val_split,
)
from .errors import ConfigError, DataError, InvariantError, SchemaError
from .gbt import (
    BINARY_LOGISTIC,
    SOFTMAX,
    SQUARED_ERROR,
    GBTModel,
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
    overlap,
    per_class_metrics,
)
from .pipeline import (
    CVReport,
    RunConfig,
    SweepResult,
    emit_report,
    run_cv,
    run_predict,
    run_sweep,
    run_train,
)

__version__ = "0.1.0"

__all__ = [
    "FScoreTable",
    "f_scores",
    "rank_features",
    "rank_order",
    "select_top_k",
    "FeatureTable",
    "LabelEncoding",
    "SplitPlan",
    "encode_labels",
    "load_feature_csv",
    "save_feature_csv",
    "stratified_kfold",
    "train_val_split",
    "ConfigError",
    "DataError",
    "InvariantError",
    "SchemaError",
    "BINARY_LOGISTIC",
    "SOFTMAX",
    "SQUARED_ERROR",
    "GBTModel",
    "ObjectiveSpec",
    "TrainParams",
    "load_model",
    "save_model",
    "train",
    "MetricsReport",
    "binary_metrics",
    "confusion",
    "fold_average",
    "macro_average",
    "overlap",
    "per_class_metrics",
    "CVReport",
    "RunConfig",
    "SweepResult",
    "emit_report",
    "run_cv",
    "run_predict",
    "run_sweep",
    "run_train",
    "__version__",
]
