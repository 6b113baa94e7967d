"""Ranking features with per-feature ANOVA F statistics.

A feature separates two classes well when its between-class variance is
large relative to its within-class variance. This script builds a small
synthetic table where only a few columns carry signal, scores every
column, and shows that the informative ones rank first.
"""

import numpy as np

from selboost import FeatureTable, f_scores, select_top_k

rng = np.random.default_rng(0)

# 120 samples, 12 features; columns 2 and 7 get a class-dependent shift,
# column 9 a weaker one, the rest are pure noise
n, d = 120, 12
labels = np.array([0] * 60 + [1] * 60)
values = rng.normal(size=(n, d))
values[labels == 1, 2] += 2.0
values[labels == 1, 7] += 1.5
values[labels == 1, 9] += 0.6

table = FeatureTable(
    values=values, labels=labels, feature_names=tuple(f"f{i}" for i in range(d))
)

scores = f_scores(table)
print("Per-feature statistics (df_between = %d, df_within = %d):" % (scores.df_b, scores.df_w))
print(f"{'feature':>8} {'msb':>10} {'msw':>10} {'F':>10}")
for i in range(d):
    print(f"{table.feature_names[i]:>8} {scores.msb[i]:10.3f} {scores.msw[i]:10.3f} {scores.f[i]:10.3f}")

print("\nRanking (best first):", [table.feature_names[i] for i in scores.ranking])

# keep the top three columns; indices are reported in the original space
reduced, selected = select_top_k(table, scores.ranking, 3)
print("Top-3 selected indices:", selected.tolist())
print("Reduced table shape:", reduced.values.shape)

# the F statistic is invariant to affine rescaling of a feature
rescaled = FeatureTable(
    values=values * 10.0 - 3.0, labels=labels, feature_names=table.feature_names
)
drift = np.max(np.abs(f_scores(rescaled).f - scores.f) / scores.f)
print(f"\nMax relative F drift after x -> 10x - 3: {drift:.2e} (expected ~1e-16)")
