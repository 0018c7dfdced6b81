import numpy as np
import pytest
from scipy import stats as scipy_stats

from easense.analysis import (
    EffectSample,
    kmeans_silhouette,
    pairwise_ttest,
    silhouette_score,
    ttest_matrix,
)


def _blobs(rng, k, per=12, spread=0.05, sep=5.0):
    angles = 2 * np.pi * np.arange(k) / k
    centers = sep * np.column_stack([np.cos(angles), np.sin(angles)])
    return np.vstack([c + rng.normal(scale=spread, size=(per, 2)) for c in centers])


class TestPairwiseTTest:
    def test_identical_samples(self):
        a = np.array([0.1, 0.2, 0.3, 0.4])
        res = pairwise_ttest(a, a.copy())
        assert res.t == 0.0
        assert res.p == 1.0

    def test_separated_constant_samples_with_jitter(self):
        rng = np.random.default_rng(0)
        a = np.zeros(4) + rng.normal(scale=1e-9, size=4)
        b = np.ones(4) + rng.normal(scale=1e-9, size=4)
        res = pairwise_ttest(a, b)
        assert abs(res.t) > 1e6
        assert res.p < 0.001
        assert res.t < 0  # b's mean exceeds a's

    def test_zero_variance_unequal_means(self):
        res = pairwise_ttest(np.zeros(4), np.ones(4))
        assert res.infinite
        assert np.isinf(res.t) and res.t < 0
        assert res.p == 0.0

    def test_matches_scipy(self):
        rng = np.random.default_rng(1)
        for _ in range(200):
            a = rng.normal(size=int(rng.integers(3, 40)))
            b = rng.normal(loc=rng.normal(), size=int(rng.integers(3, 40)))
            mine = pairwise_ttest(a, b)
            ref = scipy_stats.ttest_ind(a, b, equal_var=True)
            assert mine.t == pytest.approx(ref.statistic, rel=1e-10)
            assert mine.p == pytest.approx(ref.pvalue, rel=1e-8)

    def test_antisymmetry(self):
        rng = np.random.default_rng(2)
        for _ in range(500):
            a = rng.normal(size=10)
            b = rng.normal(size=8)
            ab = pairwise_ttest(a, b)
            ba = pairwise_ttest(b, a)
            assert ab.t == pytest.approx(-ba.t)
            assert ab.p == pytest.approx(ba.p)

    def test_affine_invariance(self):
        rng = np.random.default_rng(3)
        for _ in range(500):
            a = rng.normal(size=12)
            b = rng.normal(size=12)
            scale = rng.uniform(0.1, 50)
            shift = rng.normal()
            base = pairwise_ttest(a, b)
            moved = pairwise_ttest(scale * a + shift, scale * b + shift)
            assert moved.t == pytest.approx(base.t, rel=1e-9, abs=1e-12)
            assert moved.p == pytest.approx(base.p, rel=1e-9, abs=1e-12)

    def test_needs_two_values(self):
        with pytest.raises(ValueError):
            pairwise_ttest(np.array([1.0]), np.array([1.0, 2.0]))

    def test_sample_size_convention(self):
        values = np.arange(33, dtype=float)
        sample = EffectSample("lambda", "direct", values)
        assert sample.values.size == 33
        res = pairwise_ttest(sample, EffectSample("lambda", "interaction", values + 1))
        assert res.df == 64

    def test_matrix_is_lower_triangular(self):
        samples = [EffectSample(f"p{i}", "direct", np.arange(4.0) + i) for i in range(3)]
        rows = ttest_matrix(samples)
        assert len(rows) == 3  # C(3, 2)
        assert {(r["param_a"], r["param_b"]) for r in rows} == \
            {("p1", "p0"), ("p2", "p0"), ("p2", "p1")}


class TestKmeansSilhouette:
    def test_two_separated_blobs(self):
        rng = np.random.default_rng(4)
        X = _blobs(rng, 2)
        result = kmeans_silhouette(X, range(2, 8), seed=0)
        assert result.K == 2
        assert result.silhouette_curve[2] > 0.8

    def test_true_k_recovered(self):
        rng = np.random.default_rng(5)
        for true_k in (2, 3, 4):
            X = _blobs(rng, true_k, sep=8.0)
            result = kmeans_silhouette(X, range(2, 8), seed=1)
            assert result.K == true_k

    def test_identical_items_degenerate(self):
        X = np.ones((6, 3))
        result = kmeans_silhouette(X, range(2, 5), seed=2)
        assert result.degenerate
        assert result.K == 2

    def test_collinear_equidistant_floor(self):
        X = np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]])
        result = kmeans_silhouette(X, [2, 3], seed=3)
        assert result.K == 2

    def test_k_exceeding_items_skipped(self):
        X = np.array([[0.0, 0.0], [5.0, 5.0], [10.0, 0.0], [0.1, 0.1]])
        result = kmeans_silhouette(X, [2, 3, 50], seed=4)
        assert 50 not in result.silhouette_curve
        assert result.K >= 2

    def test_silhouette_range_and_k_floor(self):
        rng = np.random.default_rng(6)
        for _ in range(20):
            X = rng.normal(size=(12, 3))
            result = kmeans_silhouette(X, range(2, 6), seed=5)
            assert result.K >= 2
            for score in result.silhouette_curve.values():
                assert -1.0 <= score <= 1.0

    def test_local_optimum_with_fixed_centroids(self):
        rng = np.random.default_rng(7)
        X = _blobs(rng, 3)
        result = kmeans_silhouette(X, [3], seed=6)
        assign = result.assignments
        centers = np.vstack([X[assign == c].mean(axis=0) for c in range(result.K)])
        base = ((X - centers[assign]) ** 2).sum()
        for i in range(X.shape[0]):
            for c in range(result.K):
                if c == assign[i]:
                    continue
                trial = assign.copy()
                trial[i] = c
                inertia = ((X - centers[trial]) ** 2).sum()
                assert inertia >= base - 1e-9

    def test_projection_shape_and_sign(self):
        rng = np.random.default_rng(8)
        X = rng.normal(size=(10, 5)) * np.array([5.0, 1.0, 0.5, 0.1, 0.05])
        result = kmeans_silhouette(X, [2, 3], seed=7)
        assert result.projection.shape == (10, 2)
        # dominant direction carries the largest variance
        assert result.projection[:, 0].var() >= result.projection[:, 1].var()

    def test_needs_three_items(self):
        with pytest.raises(ValueError):
            kmeans_silhouette(np.ones((2, 2)), [2], seed=0)

    def test_silhouette_hand_value(self):
        X = np.array([[0.0], [1.0], [10.0], [11.0]])
        assign = np.array([0, 0, 1, 1])
        score = silhouette_score(X, assign)
        # a = 1 for every point; b = 10.5 for the outer pair, 9.5 for the inner
        expected = np.mean([(10.5 - 1) / 10.5, (9.5 - 1) / 9.5,
                            (9.5 - 1) / 9.5, (10.5 - 1) / 10.5])
        assert score == pytest.approx(expected)
