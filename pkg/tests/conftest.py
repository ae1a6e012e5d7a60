from __future__ import annotations

import math
from collections import Counter
from itertools import combinations

import numpy as np
import pytest

from driftmeter.clustering import Partition

# -- independent oracles ------------------------------------------------------


def brute_pair_counts(ref_labels, cmp_labels):
    """O(n^2) enumeration of every item pair."""
    tp = fp = fn = tn = 0
    for a, b in combinations(range(len(ref_labels)), 2):
        same_c = cmp_labels[a] == cmp_labels[b]
        same_t = ref_labels[a] == ref_labels[b]
        if same_c and same_t:
            tp += 1
        elif same_c:
            fp += 1
        elif same_t:
            fn += 1
        else:
            tn += 1
    return tp, fp, fn, tn


def entropy_from_labels(labels):
    n = len(labels)
    return -sum((c / n) * math.log2(c / n) for c in Counter(labels).values())


def vi_oracle(ref_labels, cmp_labels):
    joint = list(zip(ref_labels, cmp_labels))
    return 2 * entropy_from_labels(joint) - entropy_from_labels(ref_labels) - entropy_from_labels(cmp_labels)


def rank_sum_auc(pos_scores, neg_scores):
    """Mann-Whitney U / (n_pos * n_neg), ties at mid-rank."""
    from scipy.stats import rankdata

    allv = np.concatenate([pos_scores, neg_scores])
    ranks = rankdata(allv)
    n_p, n_n = len(pos_scores), len(neg_scores)
    u = ranks[:n_p].sum() - n_p * (n_p + 1) / 2
    return u / (n_p * n_n)


def random_partition(rng, n, k):
    """Partition of ``n`` items into exactly ``k`` non-empty clusters (k <= n)."""
    labels = np.concatenate([np.arange(k), rng.integers(0, k, size=n - k)])
    rng.shuffle(labels)
    return Partition(tuple(str(i) for i in range(n)), labels, k)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# -- acceptance reporting -------------------------------------------------------

_ACCEPTANCE: list[tuple[str, bool, str]] = []


@pytest.fixture
def acceptance():
    def record(criterion: str, ok: bool, detail: str = ""):
        _ACCEPTANCE.append((criterion, bool(ok), detail))
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, ok, detail in _ACCEPTANCE:
        line = f"{'PASS' if ok else 'FAIL'}  {criterion}"
        if detail:
            line += f"  ({detail})"
        terminalreporter.write_line(line)
