"""Seeded Lloyd's k-means, run on each time slice with one shared configuration."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Sequence

import numpy as np

from .dataset import TemporalDataset, TimeSlice, slice as take_slice
from .errors import DegenerateInput, InvalidConfig, ValidationError

__all__ = ["KMeansConfig", "Partition", "kmeans", "cluster_all", "same_partition"]

INITS = ("kmeanspp", "random_points")


@dataclass(frozen=True)
class KMeansConfig:
    k: int = 4
    max_iterations: int = 300
    tolerance: float = 1e-8
    seed: int = 0
    init: str = "kmeanspp"
    standardize: bool = False

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 2:
            raise InvalidConfig(f"k must be an integer >= 2, got {self.k}")
        if int(self.max_iterations) != self.max_iterations or self.max_iterations < 1:
            raise InvalidConfig(f"max_iterations must be a positive integer, got {self.max_iterations}")
        if not self.tolerance >= 0:
            raise InvalidConfig(f"tolerance must be >= 0, got {self.tolerance}")
        if not 0 <= int(self.seed) < 2**64:
            raise InvalidConfig(f"seed must fit in an unsigned 64-bit integer, got {self.seed}")
        if self.init not in INITS:
            raise InvalidConfig(f"init must be one of {INITS}, got {self.init!r}")


@dataclass(frozen=True, eq=False)
class Partition:
    """Cluster label per item for one time point.

    ``centroids`` is ``None`` for partitions that did not come from k-means.
    """

    item_ids: tuple[str, ...]
    labels: np.ndarray
    k: int
    centroids: np.ndarray | None = None
    time_point: int | None = None
    iterations: int = field(default=0, compare=False)

    def __post_init__(self):
        labels = np.array(self.labels, dtype=np.int64, copy=True)
        labels.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "item_ids", tuple(self.item_ids))
        if labels.ndim != 1 or len(labels) != len(self.item_ids):
            raise ValidationError("one label per item is required")
        if self.k < 1:
            raise ValidationError("k must be positive")
        if len(labels) and (labels.min() < 0 or labels.max() >= self.k):
            raise ValidationError(f"labels must lie in [0, {self.k})")
        if len(np.unique(labels)) != self.k:
            raise ValidationError("partitions may not contain empty clusters")
        if self.centroids is not None:
            c = np.array(self.centroids, dtype=float, copy=True)
            c.setflags(write=False)
            object.__setattr__(self, "centroids", c)

    @property
    def n(self) -> int:
        return len(self.labels)

    @classmethod
    def from_labels(cls, labels: Sequence[Hashable], item_ids: Sequence[str] | None = None,
                    time_point: int | None = None) -> "Partition":
        """Build a partition from arbitrary hashable labels, numbered by first appearance."""
        codes: dict[Hashable, int] = {}
        ints = [codes.setdefault(lab, len(codes)) for lab in labels]
        if item_ids is None:
            item_ids = [str(i) for i in range(len(ints))]
        return cls(tuple(item_ids), np.asarray(ints, dtype=np.int64), len(codes), time_point=time_point)

    def relabel(self, mapping) -> "Partition":
        """Apply ``mapping[old] -> new`` (a permutation of ``range(k)``)."""
        mapping = np.asarray(mapping, dtype=np.int64)
        if sorted(mapping.tolist()) != list(range(self.k)):
            raise ValidationError("relabel mapping must be a permutation of range(k)")
        centroids = None
        if self.centroids is not None:
            centroids = np.empty_like(self.centroids)
            centroids[mapping] = self.centroids
        return Partition(self.item_ids, mapping[self.labels], self.k, centroids, self.time_point)

    def members(self, label: int) -> np.ndarray:
        return np.flatnonzero(self.labels == label)


def same_partition(a: Partition, b: Partition) -> bool:
    """True when ``a`` and ``b`` group the items identically, ignoring label names."""
    if a.item_ids != b.item_ids or a.k != b.k:
        return False
    pairs = set(zip(a.labels.tolist(), b.labels.tolist()))
    return len(pairs) == a.k


def _sq_dists(X, C):
    # ||x||^2 - 2 x.c + ||c||^2 loses precision for tight clusters; use the direct form.
    diff = X[:, None, :] - C[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def _init_kmeanspp(X, k, rng):
    """Greedy k-means++: each step samples a few candidates by D^2 and keeps the best."""
    n = X.shape[0]
    n_trials = 2 + int(np.log(k))
    centers = np.empty((k, X.shape[1]))
    first = int(rng.integers(n))
    centers[0] = X[first]
    closest = _sq_dists(X, centers[:1])[:, 0]
    for c in range(1, k):
        total = closest.sum()
        if total <= 0:
            # Every point coincides with a center already chosen; callers guard against this.
            cand = rng.integers(n, size=n_trials)
        else:
            cum = np.cumsum(closest)
            cand = np.searchsorted(cum, rng.random(n_trials) * cum[-1], side="right")
            cand = np.minimum(cand, n - 1)
        d_cand = _sq_dists(X, X[cand])
        pot = np.minimum(closest[:, None], d_cand).sum(axis=0)
        best = int(np.argmin(pot))
        centers[c] = X[cand[best]]
        closest = np.minimum(closest, d_cand[:, best])
    return centers


def _init_random_points(X, k, rng):
    uniq = np.unique(X, axis=0)
    pick = rng.choice(len(uniq), size=k, replace=False)
    return uniq[np.sort(pick)].astype(float)


def _repair_empty(X, labels, centers, d):
    """Move each empty cluster's centroid onto the point farthest from its own centroid."""
    k = centers.shape[0]
    counts = np.bincount(labels, minlength=k)
    empty = np.flatnonzero(counts == 0)
    if not len(empty):
        return False
    own = d[np.arange(len(labels)), labels].copy()
    for c in empty:
        i = int(np.argmax(own))
        centers[c] = X[i]
        labels[i] = c
        own[i] = -1.0
    return True


def lloyd(X: np.ndarray, k: int, cfg: KMeansConfig):
    """Run Lloyd iterations on the rows of ``X``.

    Returns ``(labels, centers, n_iter, inertia_trace)`` where ``inertia_trace``
    holds the within-cluster sum of squares after each assignment step.
    """
    rng = np.random.default_rng(int(cfg.seed))
    centers = _init_kmeanspp(X, k, rng) if cfg.init == "kmeanspp" else _init_random_points(X, k, rng)

    trace = []
    n_iter = 0
    for n_iter in range(1, cfg.max_iterations + 1):
        d = _sq_dists(X, centers)
        labels = np.argmin(d, axis=1)  # ties -> lowest cluster index
        _repair_empty(X, labels, centers, d)
        inertia = float(np.sum((X - centers[labels]) ** 2))
        if trace:
            assert inertia <= trace[-1] * (1 + 1e-12) + 1e-12, "k-means objective increased"
        trace.append(inertia)

        new = centers.copy()
        for c in range(k):
            members = labels == c
            if members.any():
                new[c] = X[members].mean(axis=0)
        shift = float(np.sum((new - centers) ** 2))
        centers = new
        if shift <= cfg.tolerance:
            break

    d = _sq_dists(X, centers)
    labels = np.argmin(d, axis=1)
    for _ in range(10 * k):
        if not _repair_empty(X, labels, centers, d):
            break
        for c in range(k):
            centers[c] = X[labels == c].mean(axis=0)
        d = _sq_dists(X, centers)
        labels = np.argmin(d, axis=1)
    else:
        raise DegenerateInput("could not produce k non-empty clusters")
    trace.append(float(np.sum((X - centers[labels]) ** 2)))
    return labels, centers, n_iter, trace


def kmeans(ts: TimeSlice, cfg: KMeansConfig) -> Partition:
    X = np.asarray(ts.matrix, dtype=float)
    if cfg.k > X.shape[0]:
        raise DegenerateInput(f"time point {ts.time_point}: k={cfg.k} exceeds {X.shape[0]} items")
    n_distinct = len(np.unique(X, axis=0))
    if n_distinct < cfg.k:
        raise DegenerateInput(
            f"time point {ts.time_point}: {n_distinct} distinct point(s), fewer than k={cfg.k}"
        )
    if cfg.standardize:
        sd = X.std(axis=0)
        sd[sd == 0] = 1.0
        Z = (X - X.mean(axis=0)) / sd
    else:
        Z = X
    labels, _, n_iter, _ = lloyd(Z, cfg.k, cfg)
    centroids = np.vstack([X[labels == c].mean(axis=0) for c in range(cfg.k)])
    return Partition(ts.item_ids, labels, cfg.k, centroids, ts.time_point, n_iter)


def cluster_all(ds: TemporalDataset, cfg: KMeansConfig) -> list[Partition]:
    """Cluster every time point independently with the same configuration (seed included)."""
    if cfg.k > len(ds.item_ids):
        raise InvalidConfig(f"k={cfg.k} exceeds the number of items ({len(ds.item_ids)})")
    return [kmeans(take_slice(ds, t), cfg) for t in ds.time_points]
