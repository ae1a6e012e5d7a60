"""External cluster validity indices between a reference and a comparison partition.

Conventions for pairs of items (C = comparison, T = reference):

    same in C, same in T        -> TP
    same in C, different in T   -> FP
    different in C, same in T   -> FN
    different in C, different T -> TN

Everything is derived from the r x k contingency table, so pair counting is
O(r*k) rather than O(n^2).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .clustering import Partition
from .errors import AllZeroSeriesWarning, ItemMismatch, UndefinedIndexWarning, ValidationError

__all__ = [
    "ContingencyTable",
    "PairCounts",
    "IndexReport",
    "contingency",
    "pair_counts",
    "jaccard",
    "rand",
    "fowlkes_mallows",
    "variation_of_information",
    "scaled_reversed_vi",
    "entropy_bits",
]


@dataclass(frozen=True, eq=False)
class ContingencyTable:
    """``counts[i, j]`` = items with comparison label ``i`` and reference label ``j``."""

    counts: np.ndarray
    n: int

    def __post_init__(self):
        c = np.array(self.counts, dtype=np.int64, copy=True)
        if c.ndim != 2 or (c < 0).any():
            raise ValidationError("contingency counts must be a 2-D array of non-negative integers")
        if int(c.sum()) != self.n:
            raise ValidationError("contingency counts must sum to n")
        c.setflags(write=False)
        object.__setattr__(self, "counts", c)

    @property
    def row_sums(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    @property
    def col_sums(self) -> np.ndarray:
        return self.counts.sum(axis=0)


@dataclass(frozen=True)
class PairCounts:
    tp: int
    fp: int
    tn: int
    fn: int
    n_pairs: int

    def __post_init__(self):
        if min(self.tp, self.fp, self.tn, self.fn) < 0:
            raise ValidationError("pair counts must be non-negative")
        if self.tp + self.fp + self.tn + self.fn != self.n_pairs:
            raise ValidationError("pair counts must add up to n_pairs")

    def swapped(self) -> "PairCounts":
        """Counts with the roles of reference and comparison exchanged."""
        return PairCounts(self.tp, self.fn, self.tn, self.fp, self.n_pairs)


@dataclass
class IndexReport:
    jaccard: float | None = None
    rand: float | None = None
    fowlkes_mallows: float | None = None
    vi: float | None = None
    scaled_reversed_vi: float | None = None
    auc: float | None = None


def contingency(reference: Partition, comparison: Partition) -> ContingencyTable:
    if tuple(reference.item_ids) != tuple(comparison.item_ids):
        raise ItemMismatch("partitions must cover the same items in the same order")
    counts = np.zeros((comparison.k, reference.k), dtype=np.int64)
    np.add.at(counts, (comparison.labels, reference.labels), 1)
    return ContingencyTable(counts, reference.n)


def _choose2(x) -> int:
    x = np.asarray(x, dtype=np.int64)
    return int(np.sum(x * (x - 1) // 2))


def pair_counts(ct: ContingencyTable) -> PairCounts:
    n_pairs = ct.n * (ct.n - 1) // 2
    tp = _choose2(ct.counts)
    fp = _choose2(ct.row_sums) - tp
    fn = _choose2(ct.col_sums) - tp
    tn = n_pairs - tp - fp - fn
    return PairCounts(tp=tp, fp=fp, tn=tn, fn=fn, n_pairs=n_pairs)


def jaccard(pc: PairCounts) -> float:
    """TP / (TP + FN + FP).

    When no pair is together in either partition (both all-singletons) the
    ratio is 0/0; the partitions agree, so 1.0 is reported with a warning.
    """
    denom = pc.tp + pc.fn + pc.fp
    if denom == 0:
        warnings.warn("Jaccard undefined (no co-clustered pairs); reporting 1.0",
                      UndefinedIndexWarning, stacklevel=2)
        return 1.0
    return pc.tp / denom


def rand(pc: PairCounts) -> float:
    if pc.n_pairs == 0:
        raise ValidationError("Rand statistic needs at least two items")
    return (pc.tp + pc.tn) / pc.n_pairs


def fowlkes_mallows(pc: PairCounts) -> float:
    """TP / sqrt((TP + FN)(TP + FP)), i.e. the geometric mean of pair precision and recall.

    Reports 0.0 with a warning when either factor is zero.
    """
    a, b = pc.tp + pc.fn, pc.tp + pc.fp
    if a == 0 or b == 0:
        warnings.warn("Fowlkes-Mallows undefined (a pair-count factor is zero); reporting 0.0",
                      UndefinedIndexWarning, stacklevel=2)
        return 0.0
    return pc.tp / math.sqrt(a * b)


def entropy_bits(counts) -> float:
    """Shannon entropy (base 2) of the distribution given by non-negative ``counts``.

    ``math.fsum`` makes the result independent of the order of the counts.
    """
    c = np.asarray(counts, dtype=float).ravel()
    c = c[c > 0]
    n = c.sum()
    if n == 0:
        return 0.0
    p = c / n
    return max(0.0, -math.fsum((p * np.log2(p)).tolist()))


def variation_of_information(ct: ContingencyTable) -> float:
    """2 H(T, C) - H(T) - H(C) in bits."""
    if ct.n <= 0:
        raise ValidationError("variation of information needs at least one item")
    h_joint = entropy_bits(ct.counts)
    h_c = entropy_bits(ct.row_sums)
    h_t = entropy_bits(ct.col_sums)
    vi = 2.0 * h_joint - h_t - h_c
    # Identical partitions give exactly equal entropies; clip float residue elsewhere.
    return max(0.0, vi)


def scaled_reversed_vi(vi_series: Sequence[float]) -> list[float]:
    """Rescale a run of VI values to ``1 - vi / max(vi)`` so that 1 means identical."""
    vals = [float(v) for v in vi_series]
    if not vals:
        raise ValidationError("VI series is empty")
    if any(v < 0 or not math.isfinite(v) for v in vals):
        raise ValidationError("VI values must be finite and non-negative")
    top = max(vals)
    if top == 0:
        warnings.warn("every VI in the series is zero; scaled series is all 1.0",
                      AllZeroSeriesWarning, stacklevel=2)
        return [1.0] * len(vals)
    return [1.0 - v / top for v in vals]


def indices_for(reference: Partition, comparison: Partition) -> IndexReport:
    """Pair-counting indices and VI for one comparison (no AUC, no rescaling)."""
    ct = contingency(reference, comparison)
    pc = pair_counts(ct)
    return IndexReport(
        jaccard=jaccard(pc),
        rand=rand(pc),
        fowlkes_mallows=fowlkes_mallows(pc),
        vi=variation_of_information(ct),
    )
