import numpy as np
import pytest
import scipy.stats

from selboost.anova import f_scores, rank_features, rank_order, save_scores_csv, select_top_k
from selboost.dataset import FeatureTable

from conftest import random_table
from oracles import anova_oracle, pooled_t_statistic


def one_feature_table(class_values):
    values, labels = [], []
    for cls, xs in enumerate(class_values):
        for x in xs:
            values.append([float(x)])
            labels.append(cls)
    return FeatureTable(
        values=np.array(values), labels=np.array(labels), feature_names=("f0",)
    )


class TestFScores:
    def test_hand_example(self):
        scores = f_scores(one_feature_table([(0, 2), (1, 3)]))
        assert scores.msb[0] == pytest.approx(1.0, rel=1e-12)
        assert scores.msw[0] == pytest.approx(2.0, rel=1e-12)
        assert scores.f[0] == pytest.approx(0.5, rel=1e-12)
        assert scores.df_b == 1 and scores.df_w == 2

    def test_zero_within_variance_gives_infinite_f(self):
        scores = f_scores(one_feature_table([(0, 0), (1, 1), (2, 2)]))
        assert scores.msw[0] == 0.0
        assert scores.msb[0] > 0.0
        assert scores.f[0] == np.inf

    def test_translation_invariance(self):
        base = f_scores(one_feature_table([(0, 0), (1, 1), (2, 2)]))
        shifted = f_scores(one_feature_table([(10, 10), (11, 11), (12, 12)]))
        assert shifted.msb[0] == pytest.approx(base.msb[0], rel=1e-12)
        assert shifted.msw[0] == base.msw[0]
        assert shifted.f[0] == base.f[0]

    def test_constant_feature_scores_zero(self):
        scores = f_scores(one_feature_table([(5, 5), (5, 5)]))
        assert scores.msb[0] == 0.0 and scores.msw[0] == 0.0 and scores.f[0] == 0.0

    def test_matches_oracle_on_random_tables(self, rng):
        for _ in range(25):
            table = random_table(rng)
            scores = f_scores(table)
            msb, msw, f = anova_oracle(table.values.tolist(), table.labels.tolist())
            np.testing.assert_allclose(scores.msb, msb, rtol=1e-9)
            np.testing.assert_allclose(scores.msw, msw, rtol=1e-9)
            np.testing.assert_allclose(scores.f, f, rtol=1e-9)

    def test_matches_scipy_f_oneway(self, rng):
        table = random_table(rng, n=40, d=6, k=3)
        groups = [table.values[table.labels == c] for c in range(3)]
        expected = scipy.stats.f_oneway(*groups).statistic
        np.testing.assert_allclose(f_scores(table).f, expected, rtol=1e-9)

    def test_binary_f_equals_squared_pooled_t(self, rng):
        for _ in range(20):
            table = random_table(rng, k=2)
            scores = f_scores(table)
            for j in range(table.n_features):
                a = table.values[table.labels == 0, j].tolist()
                b = table.values[table.labels == 1, j].tolist()
                t = pooled_t_statistic(a, b)
                assert scores.f[j] == pytest.approx(t * t, rel=1e-9)

    def test_affine_invariance(self, rng):
        table = random_table(rng, n=30, d=8, k=3)
        base = f_scores(table).f
        a = rng.uniform(0.5, 3.0, size=8) * rng.choice([-1.0, 1.0], size=8)
        b = rng.uniform(-10, 10, size=8)
        scaled = FeatureTable(
            values=table.values * a + b,
            labels=table.labels,
            feature_names=table.feature_names,
        )
        np.testing.assert_allclose(f_scores(scaled).f, base, rtol=1e-9)

    def test_sample_permutation_invariance(self, rng):
        table = random_table(rng, n=25, d=5, k=3)
        perm = rng.permutation(25)
        shuffled = FeatureTable(
            values=table.values[perm],
            labels=table.labels[perm],
            feature_names=table.feature_names,
        )
        a, b = f_scores(table), f_scores(shuffled)
        np.testing.assert_allclose(a.f, b.f, rtol=1e-12)
        assert np.array_equal(a.ranking, b.ranking)

    def test_preconditions(self):
        single = FeatureTable(
            values=np.ones((3, 1)), labels=np.zeros(3, dtype=int), feature_names=("f0",)
        )
        with pytest.raises(ValueError, match="2 classes"):
            f_scores(single)
        tiny = FeatureTable(
            values=np.array([[0.0], [1.0]]), labels=np.array([0, 1]), feature_names=("f0",)
        )
        with pytest.raises(ValueError, match="more samples"):
            f_scores(tiny)


class TestRanking:
    def test_infinite_above_finite_with_index_ties(self):
        assert rank_order(np.array([0.5, np.inf, 0.5])).tolist() == [1, 0, 2]

    def test_all_equal_is_index_order(self):
        assert rank_order(np.array([2.0, 2.0, 2.0, 2.0])).tolist() == [0, 1, 2, 3]

    def test_simple_descending(self):
        assert rank_order(np.array([3.0, 1.0, 2.0])).tolist() == [0, 2, 1]

    def test_rank_features_returns_table_ranking(self, rng):
        table = random_table(rng)
        scores = f_scores(table)
        assert np.array_equal(rank_features(scores), scores.ranking)

    def test_f_values_non_increasing_along_ranking(self, rng):
        for _ in range(10):
            scores = f_scores(random_table(rng))
            ordered = scores.f[scores.ranking]
            assert np.all(np.diff(ordered) <= 0)
            assert sorted(scores.ranking.tolist()) == list(range(scores.n_features))


class TestSelectTopK:
    def test_k_equals_d_is_a_column_permutation(self, rng):
        table = random_table(rng, n=20, d=6)
        ranking = f_scores(table).ranking
        reduced, selected = select_top_k(table, ranking, 6)
        assert sorted(selected.tolist()) == list(range(6))
        assert np.array_equal(reduced.values, table.values[:, ranking])
        assert np.array_equal(reduced.labels, table.labels)

    def test_prefix_consistency(self, rng):
        table = random_table(rng, n=30, d=10)
        ranking = f_scores(table).ranking
        for k in range(1, 10):
            small, sel_small = select_top_k(table, ranking, k)
            big, sel_big = select_top_k(table, ranking, k + 1)
            assert np.array_equal(sel_small, sel_big[:k])
            assert np.array_equal(small.values, big.values[:, :k])

    def test_columns_follow_ranking_order_and_names(self, rng):
        table = random_table(rng, n=15, d=5)
        ranking = f_scores(table).ranking
        reduced, selected = select_top_k(table, ranking, 3)
        assert np.array_equal(selected, ranking[:3])
        assert reduced.feature_names == tuple(table.feature_names[i] for i in ranking[:3])

    def test_k_out_of_range(self, rng):
        table = random_table(rng, d=4)
        ranking = f_scores(table).ranking
        for bad in (0, 5):
            with pytest.raises(ValueError):
                select_top_k(table, ranking, bad)


def test_score_dump_csv(tmp_path, rng):
    table = random_table(rng, n=12, d=4)
    scores = f_scores(table)
    path = tmp_path / "scores.csv"
    save_scores_csv(scores, path, feature_names=table.feature_names)
    lines = path.read_text().splitlines()
    assert lines[0] == "feature,msb,msw,f,rank"
    assert len(lines) == 5
    ranks = sorted(int(line.rsplit(",", 1)[1]) for line in lines[1:])
    assert ranks == [1, 2, 3, 4]
