import numpy as np
import pytest

from driftmeter.clustering import KMeansConfig, Partition
from driftmeter.dataset import TemporalDataset
from driftmeter.errors import InvalidConfig, InvalidThreshold
from driftmeter.game import simulate
from driftmeter.monic import AgingPolicy, track, track_partitions, transition
from driftmeter.synthgen import QUADRANT_SIGNS, SynthConfig, generate


def redistribution_dataset(n_per=30, seed=0):
    """Quadrant 3 empties between t=1 and t=2; its items split evenly over quadrants 0-2."""
    rng = np.random.default_rng(seed)
    labels1 = np.repeat(np.arange(4), n_per)
    labels2 = labels1.copy()
    movers = np.flatnonzero(labels1 == 3)
    labels2[movers] = np.arange(len(movers)) % 3
    values = np.empty((4 * n_per, 2, 2))
    for j, lab in enumerate((labels1, labels2)):
        values[:, j] = QUADRANT_SIGNS[lab] * 5.0 + rng.normal(0, 0.5, size=(4 * n_per, 2))
    ids = tuple(str(i) for i in range(4 * n_per))
    return TemporalDataset(ids, (1, 2), ("x", "y"), values), labels1, labels2


def test_stable_data_all_survive():
    ds, _ = generate(SynthConfig(max_jumps=0, seed=2))
    report = track(ds, KMeansConfig(seed=2))
    assert len(report.transitions) == 19
    assert report.rows() == [(t, 4, 0, 0) for t in range(1, 20)]
    for tr in report.transitions:
        assert all(r == 1.0 for _, _, r in tr.matches)


def test_redistribution_overlap_arithmetic():
    _, l1, l2 = redistribution_dataset()
    # the source cluster sends a third of its items to each target: below tau = 0.5
    sent = np.bincount(l2[l1 == 3], minlength=4) / np.sum(l1 == 3)
    assert sent.max() == pytest.approx(1 / 3)


def test_redistribution_disappears_and_replacement_appears():
    ds, l1, _ = redistribution_dataset()
    tr = track(ds, KMeansConfig(seed=0)).transitions[0]
    assert tr.disappeared >= 1 and tr.appeared >= 1
    assert tr.survived + tr.disappeared == 4


def test_identical_partitions_overlap_one():
    p = Partition.from_labels([0, 0, 1, 1, 2, 2, 3, 3], time_point=1)
    q = Partition(p.item_ids, p.labels, 4, time_point=2)
    tr = transition(p, q, np.ones(8), 0.5)
    assert (tr.survived, tr.appeared, tr.disappeared) == (4, 0, 0)
    assert [m[2] for m in tr.matches] == [1.0] * 4


def test_many_to_one_absorption():
    old = Partition.from_labels([0, 0, 0, 1, 1, 1, 2, 2])
    new = Partition.from_labels([0, 0, 0, 0, 0, 0, 1, 2])
    tr = transition(old, new, np.ones(8), 0.5)
    assert tr.survivors == {0: 0, 1: 0, 2: 1}
    assert (tr.survived, tr.appeared, tr.disappeared) == (3, 1, 0)


def test_aging_newcomers_weigh_more():
    t1 = Partition.from_labels([0] * 6 + [1] * 6, time_point=1)
    # at t2 cluster 0 gains two newcomers (items 6, 7)
    t2 = Partition(t1.item_ids, [0] * 8 + [1] * 4, 2, time_point=2)
    # at t3 the newcomers stay in 0, the old members move to 1 except two
    t3 = Partition(t1.item_ids, [0, 0, 1, 1, 1, 1, 0, 0, 1, 1, 1, 1], 2, time_point=3)
    aged = track_partitions([t1, t2, t3], AgingPolicy(), 0.55).transitions[1]
    flat = track_partitions([t1, t2, t3], AgingPolicy.no_aging(), 0.55).transitions[1]
    # cluster 0 at t2: 6 carried-over (w=0.5) + 2 newcomers (w=1); in new cluster 0: 2 old + 2 new
    assert aged.matches[0] == (0, 0, pytest.approx((2 * 0.5 + 2) / (6 * 0.5 + 2)))
    assert flat.matches[0] == (0, 0, pytest.approx(4 / 8))
    assert 0 in aged.survivors and 0 not in flat.survivors
    # the first pair has no history, so both policies agree there
    assert track_partitions([t1, t2], AgingPolicy(), 0.5).rows() == \
        track_partitions([t1, t2], AgingPolicy.no_aging(), 0.5).rows()


def test_survived_plus_disappeared_is_k():
    for seed in range(5):
        ds = simulate(140, 10, drift_rate=0.05, seed=seed)
        report = track(ds, KMeansConfig(seed=seed))
        assert len(report.transitions) == 9
        for tr in report.transitions:
            assert tr.survived + tr.disappeared == 4
            assert tr.appeared == 4 - len(set(tr.survivors.values()))
            assert tr.survived <= 4 and min(tr.appeared, tr.disappeared) >= 0


def test_deterministic():
    ds = simulate(140, 10, drift_rate=0.1, seed=3)
    a = track(ds, KMeansConfig(seed=1)).to_dict()
    b = track(ds, KMeansConfig(seed=1)).to_dict()
    assert a == b


@pytest.mark.parametrize("tau", [0.0, -0.1, 1.5])
def test_invalid_threshold(tau):
    ds, _ = generate(SynthConfig(n_items=40, n_time_points=3, seed=0))
    with pytest.raises(InvalidThreshold):
        track(ds, KMeansConfig(), tau_match=tau)


def test_policy_validation():
    with pytest.raises(InvalidConfig):
        AgingPolicy(previous_weight=0.0)
    with pytest.raises(InvalidConfig):
        AgingPolicy(horizon=1)
