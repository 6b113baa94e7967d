"""Persisting a trained pipeline and predicting new data.

`run_train` writes two artifacts: `model.json` (the boosted forest, schema
versioned, repr-exact floats so reloads predict bit-identically) and
`selection.json` (which original columns the model consumes, by name).
`run_predict` projects any CSV through the selection by column name, so
reordered or extra columns are harmless.
"""

import tempfile
from pathlib import Path

import numpy as np

from selboost import (
    FeatureTable,
    RunConfig,
    TrainParams,
    encode_labels,
    load_model,
    run_predict,
    run_train,
    save_feature_csv,
)

rng = np.random.default_rng(21)
n, d = 160, 30
labels = np.array([0, 1] * (n // 2))
values = rng.normal(size=(n, d))
for col in (4, 11, 19):
    values[labels == 1, col] += 1.6
table = FeatureTable(
    values=values, labels=labels, feature_names=tuple(f"f{i}" for i in range(d))
)
encoding = encode_labels(["covid", "normal"])

workdir = Path(tempfile.mkdtemp(prefix="selboost-demo-"))
train_csv = workdir / "train.csv"
save_feature_csv(table, encoding, train_csv)

config = RunConfig(
    input=str(train_csv),
    n_features=3,
    out_dir=str(workdir / "run"),
    train_params=TrainParams(rounds=40, max_depth=3),
)
model_path, selection_path = run_train(config)
print("Wrote:", model_path)
print("Wrote:", selection_path)
print("\nSelection file:")
print(selection_path.read_text())

model = load_model(model_path)
print(f"Model: {len(model.trees)} trees, eta={model.eta}, "
      f"expects {model.n_features_expected} features")

# predict the training csv itself; the output carries decoded class names
preds_path = run_predict(model_path, selection_path, train_csv, workdir / "preds.csv")
lines = preds_path.read_text().splitlines()
print("\nFirst prediction rows:")
print("\n".join(lines[:4]))

correct = sum(
    encoding.mapping[line.split(",")[1]] == labels[i]
    for i, line in enumerate(lines[1:])
)
print(f"\nTraining-set accuracy from the prediction file: {correct / n:.0%}")

# a column-permuted copy predicts identically: projection is name-driven
permuted = FeatureTable(
    values=table.values[:, ::-1],
    labels=table.labels,
    feature_names=tuple(reversed(table.feature_names)),
)
permuted_csv = workdir / "permuted.csv"
save_feature_csv(permuted, encoding, permuted_csv)
again = run_predict(model_path, selection_path, permuted_csv, workdir / "preds2.csv")
print(
    "Column-permuted input predicts identically:",
    again.read_text() == preds_path.read_text(),
)
