import numpy as np
import pytest

from selboost.dataset import FeatureTable


def random_table(rng, n=None, d=None, k=None) -> FeatureTable:
    """Small random table with every class present at least once."""
    n = n or int(rng.integers(6, 51))
    d = d or int(rng.integers(1, 21))
    k = k or int(rng.integers(2, 4))
    labels = np.concatenate([np.arange(k), rng.integers(0, k, size=n - k)])
    rng.shuffle(labels)
    values = rng.normal(size=(n, d))
    return FeatureTable(
        values=values,
        labels=labels,
        feature_names=tuple(f"f{i}" for i in range(d)),
    )


INFORMATIVE = (3, 17, 42, 61, 88)
# equal, moderate shifts: each informative feature still improves the
# validation accuracy, so sweeps keep climbing through k = 5
INFORMATIVE_SHIFTS = (1.0, 1.0, 1.0, 1.0, 1.0)


def synthetic_benchmark(seed=1234, n_per_class=100, d=100):
    """Two balanced classes; five features carry a mean shift, the rest are
    pure noise. Used by the pipeline and acceptance suites."""
    rng = np.random.default_rng(seed)
    n = 2 * n_per_class
    values = rng.normal(size=(n, d))
    labels = np.array([0] * n_per_class + [1] * n_per_class)
    order = rng.permutation(n)
    values, labels = values[order], labels[order]
    for col, shift in zip(INFORMATIVE, INFORMATIVE_SHIFTS):
        values[labels == 1, col] += shift
    return FeatureTable(
        values=values,
        labels=labels,
        feature_names=tuple(f"f{i}" for i in range(d)),
    )


def separable_dataset(n=100, seed=7):
    """Fixed linearly separable two-feature binary set with a clear margin."""
    rng = np.random.default_rng(seed)
    X = rng.uniform(-1, 1, size=(4 * n, 2))
    margin = X[:, 0] + X[:, 1]
    X = X[np.abs(margin) > 0.2][:n]
    assert X.shape[0] == n
    y = (X[:, 0] + X[:, 1] > 0).astype(np.int64)
    return X, y


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
