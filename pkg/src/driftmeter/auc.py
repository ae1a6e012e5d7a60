"""Label alignment, trapezoidal ROC/AUC and Hand & Till multi-class AUC.

Unlike the pair-counting indices, AUC looks at label *names*, so two k-means
partitions must first be put in the same label space.  ``align`` finds the
bijection comparison -> reference that maximises the number of items that
keep their label.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .clustering import Partition
from .errors import DegeneratePairWarning, KMismatch, ValidationError
from .validity import contingency

__all__ = [
    "Alignment",
    "RocCurve",
    "align",
    "align_table",
    "binary_auc",
    "multiclass_auc",
    "pairwise_auc",
]


@dataclass(frozen=True)
class Alignment:
    """``mapping[c]`` is the reference label assigned to comparison label ``c``."""

    mapping: tuple[int, ...]
    overlap: int


@dataclass(frozen=True)
class RocCurve:
    points: tuple[tuple[float, float], ...]
    auc: float | None  # None: only one class present, AUC undefined

    @property
    def defined(self) -> bool:
        return self.auc is not None


def align_table(counts) -> Alignment:
    """Optimal assignment on a square contingency table (rows: comparison, cols: reference).

    Rows are visited in a canonical order (descending by their count profile,
    original index breaking exact duplicates) before solving, so the chosen
    optimum does not depend on how the comparison clusters happen to be
    numbered.  Rows with identical profiles are interchangeable.
    """
    counts = np.asarray(counts, dtype=np.int64)
    if counts.ndim != 2 or counts.shape[0] != counts.shape[1]:
        raise KMismatch(f"alignment needs equal cluster counts, got table of shape {counts.shape}")
    k = counts.shape[0]
    order = sorted(range(k), key=lambda i: (tuple(-counts[i]), i))
    canon = counts[order]
    rows, cols = linear_sum_assignment(canon, maximize=True)
    mapping = [0] * k
    for r, c in zip(rows.tolist(), cols.tolist()):
        mapping[order[r]] = c
    overlap = int(sum(counts[i, mapping[i]] for i in range(k)))
    return Alignment(tuple(mapping), overlap)


def align(reference: Partition, comparison: Partition) -> Alignment:
    if reference.k != comparison.k:
        raise KMismatch(f"reference has k={reference.k}, comparison has k={comparison.k}")
    return align_table(contingency(reference, comparison).counts)


def binary_auc(truth: Sequence[bool], scores: Sequence[float]) -> RocCurve:
    """ROC curve and trapezoidal area.

    Thresholds sweep the distinct scores from high to low; tied scores move
    the curve in a single diagonal step, which is the mid-rank treatment.
    """
    y = np.asarray(truth, dtype=bool)
    s = np.asarray(scores, dtype=float)
    if y.shape != s.shape or y.ndim != 1:
        raise ValidationError("truth and scores must be 1-D and of equal length")
    n_pos = int(y.sum())
    n_neg = len(y) - n_pos
    if n_pos == 0 or n_neg == 0:
        return RocCurve(((0.0, 0.0), (1.0, 1.0)), None)

    order = np.argsort(-s, kind="stable")
    s, y = s[order], y[order]
    last_of_group = np.r_[np.flatnonzero(np.diff(s) != 0), len(s) - 1]
    tps = np.cumsum(y)[last_of_group]
    fps = (last_of_group + 1) - tps
    tpr = np.r_[0, tps] / n_pos
    fpr = np.r_[0, fps] / n_neg

    # Trapezoids: integer arithmetic until the final division keeps this exact-ish.
    tp_all = np.r_[0, tps].astype(np.int64)
    fp_all = np.r_[0, fps].astype(np.int64)
    twice_area = int(np.sum((fp_all[1:] - fp_all[:-1]) * (tp_all[1:] + tp_all[:-1])))
    auc = twice_area / (2 * n_pos * n_neg)
    points = tuple(zip(fpr.tolist(), tpr.tolist()))
    return RocCurve(points, auc)


def pairwise_auc(ref_labels, cmp_labels, i: int, j: int) -> float | None:
    """Symmetrised two-class AUC between classes ``i`` and ``j`` (Hand & Till's A-hat).

    Items whose reference label is ``i`` or ``j`` are kept; an item scores 1 for
    class ``c`` when its (aligned) comparison label is ``c``.
    """
    ref_labels = np.asarray(ref_labels)
    cmp_labels = np.asarray(cmp_labels)
    keep = (ref_labels == i) | (ref_labels == j)
    r, c = ref_labels[keep], cmp_labels[keep]
    a_ij = binary_auc(r == i, (c == i).astype(float)).auc
    a_ji = binary_auc(r == j, (c == j).astype(float)).auc
    if a_ij is None or a_ji is None:
        return None
    return (a_ij + a_ji) / 2.0


def multiclass_auc(reference: Partition, comparison: Partition, *, align_labels: bool = True) -> float:
    """Hand & Till multi-class AUC of ``comparison`` against ``reference``.

    The average runs over the c(c-1)/2 unordered class pairs, i.e. the
    coefficient is 2 / (c(c-1)).  Pairs with an empty side are skipped (with a
    warning) and the divisor shrinks accordingly.
    """
    if align_labels:
        comparison = comparison.relabel(align(reference, comparison).mapping)
    elif comparison.k != reference.k:
        raise KMismatch(f"reference has k={reference.k}, comparison has k={comparison.k}")
    c = reference.k
    if c < 2:
        raise ValidationError("multi-class AUC needs at least two classes")

    values = []
    skipped = 0
    for i, j in combinations(range(c), 2):
        a = pairwise_auc(reference.labels, comparison.labels, i, j)
        if a is None:
            skipped += 1
        else:
            values.append(a)
    if skipped:
        warnings.warn(f"{skipped} degenerate class pair(s) skipped in multi-class AUC",
                      DegeneratePairWarning, stacklevel=2)
    if not values:
        raise ValidationError("every class pair was degenerate; multi-class AUC undefined")
    return math.fsum(values) / len(values)
