import numpy as np
import pytest

from driftmeter.clustering import KMeansConfig, Partition, cluster_all, kmeans, lloyd, same_partition
from driftmeter.dataset import TemporalDataset, TimeSlice
from driftmeter.errors import DegenerateInput, InvalidConfig
from driftmeter.game import simulate
from driftmeter.synthgen import SynthConfig, generate


def _quadrants(n_per=25, sigma=0.5, seed=0):
    rng = np.random.default_rng(seed)
    centers = np.array([(5, 5), (-5, 5), (-5, -5), (5, -5)], dtype=float)
    X = np.repeat(centers, n_per, axis=0) + rng.normal(0, sigma, size=(4 * n_per, 2))
    return TimeSlice(tuple(str(i) for i in range(len(X))), X, 1)


def test_quadrants_recovered_against_sign_oracle():
    ts = _quadrants()
    p = kmeans(ts, KMeansConfig(k=4, seed=3))
    X = ts.matrix
    oracle = Partition.from_labels(list(zip(X[:, 0] > 0, X[:, 1] > 0)), ts.item_ids)
    assert same_partition(p, oracle)


def test_k_equals_n_gives_singletons():
    X = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 3.0], [7.0, 7.0]])
    p = kmeans(TimeSlice(tuple("abcd"), X, 1), KMeansConfig(k=4, seed=1))
    assert sorted(p.labels.tolist()) == [0, 1, 2, 3]
    np.testing.assert_allclose(p.centroids[p.labels], X)


@pytest.mark.parametrize("init", ["kmeanspp", "random_points"])
def test_deterministic(init):
    ts = _quadrants(sigma=2.5, seed=9)
    cfg = KMeansConfig(k=4, seed=42, init=init)
    a, b = kmeans(ts, cfg), kmeans(ts, cfg)
    assert a.labels.tobytes() == b.labels.tobytes()
    assert a.centroids.tobytes() == b.centroids.tobytes()


def test_too_few_distinct_points():
    X = np.array([[1.0, 1.0]] * 5 + [[2.0, 2.0]] * 5)
    with pytest.raises(DegenerateInput):
        kmeans(TimeSlice(tuple(str(i) for i in range(10)), X, 7), KMeansConfig(k=3))


@pytest.mark.parametrize("seed", range(5))
def test_objective_non_increasing(seed):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(200, 3))
    _, _, _, trace = lloyd(X, 6, KMeansConfig(k=6, seed=seed, init="random_points"))
    assert all(b <= a * (1 + 1e-12) for a, b in zip(trace, trace[1:]))


def test_nearest_centroid_assignment():
    rng = np.random.default_rng(5)
    X = rng.normal(size=(150, 2)) * 3
    p = kmeans(TimeSlice(tuple(str(i) for i in range(150)), X, 1), KMeansConfig(k=5, seed=5))
    d = ((X[:, None, :] - p.centroids[None]) ** 2).sum(-1)
    assert np.all(d[np.arange(150), p.labels] <= d.min(axis=1) + 1e-9)


def test_empty_cluster_repair_keeps_k():
    # Two far-apart blobs and k=3 from a deliberately bad start still yields 3 clusters.
    X = np.vstack([np.zeros((10, 2)) + np.arange(10)[:, None] * 1e-3, np.full((10, 2), 100.0)])
    for seed in range(10):
        p = kmeans(TimeSlice(tuple(str(i) for i in range(20)), X, 1),
                   KMeansConfig(k=3, seed=seed, init="random_points"))
        assert len(np.unique(p.labels)) == 3


def test_standardize_option():
    rng = np.random.default_rng(0)
    # x separates the groups only after scaling; y carries large irrelevant spread
    x = np.r_[np.zeros(50), np.ones(50)] * 0.01 + rng.normal(0, 1e-4, 100)
    y = rng.normal(0, 5, 100)
    X = np.c_[x, y]
    ts = TimeSlice(tuple(str(i) for i in range(100)), X, 1)
    truth = Partition.from_labels((x > 0.005).tolist(), ts.item_ids)
    assert same_partition(kmeans(ts, KMeansConfig(k=2, seed=0, standardize=True)), truth)


def test_cluster_all_synthetic():
    ds, _ = generate(SynthConfig(seed=0))
    parts = cluster_all(ds, KMeansConfig(k=4))
    assert len(parts) == 20
    assert all(len(np.unique(p.labels)) == 4 for p in parts)
    assert [p.time_point for p in parts] == list(ds.time_points)


def test_identical_slices_identical_partitions():
    ts = _quadrants(seed=1)
    ds = TemporalDataset(ts.item_ids, (1, 2), ("x", "y"), np.stack([ts.matrix, ts.matrix], axis=1))
    a, b = cluster_all(ds, KMeansConfig(k=4, seed=8))
    assert np.array_equal(a.labels, b.labels)


def test_cluster_all_game_shape():
    ds = simulate(140, 10, seed=1)
    parts = cluster_all(ds, KMeansConfig(k=4))
    assert len(parts) == 10
    assert all(p.labels.min() >= 0 and p.labels.max() < 4 for p in parts)


def test_degenerate_time_point_is_named():
    values = np.zeros((6, 2, 1))
    values[:, 0, 0] = np.arange(6)
    ds = TemporalDataset(tuple("abcdef"), (1, 2), ("x",), values)
    with pytest.raises(DegenerateInput, match="time point 2"):
        cluster_all(ds, KMeansConfig(k=3))


@pytest.mark.parametrize("kwargs", [{"k": 1}, {"max_iterations": 0}, {"tolerance": -1.0},
                                    {"init": "forgy"}, {"seed": -1}])
def test_config_validation(kwargs):
    with pytest.raises(InvalidConfig):
        KMeansConfig(**kwargs)
