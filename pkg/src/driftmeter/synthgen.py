"""Four-quadrant synthetic drift benchmark.

Items sit in four clusters centred at (+-d, +-d).  Between time points a
random number of items jump to another quadrant by flipping the sign of x,
y or both; every item also gets fresh Gaussian jitter about its centre.

Draw order from a single ``numpy.random.Generator(seed)``:

1. jitter for time point 1, shape (n_items, 2);
2. for each later time point: jump count, jumper indices, flip kinds, jitter.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .clustering import KMeansConfig, Partition, cluster_all, same_partition
from .dataset import TemporalDataset
from .errors import InvalidConfig

__all__ = ["SynthConfig", "GroundTruthTrace", "generate", "evaluate_recovery", "quadrant_label", "QUADRANT_SIGNS"]

# label -> (sign x, sign y)
QUADRANT_SIGNS = np.array([(1, 1), (-1, 1), (-1, -1), (1, -1)], dtype=np.int64)
_FLIPS = np.array([(-1, 1), (1, -1), (-1, -1)], dtype=np.int64)  # x, y, both


def quadrant_label(sx, sy):
    """Quadrant index for sign arrays (anything >= 0 counts as positive)."""
    sx = np.where(np.asarray(sx) >= 0, 1, -1)
    sy = np.where(np.asarray(sy) >= 0, 1, -1)
    return np.select(
        [(sx > 0) & (sy > 0), (sx < 0) & (sy > 0), (sx < 0) & (sy < 0)], [0, 1, 2], default=3
    )


@dataclass(frozen=True)
class SynthConfig:
    n_items: int = 500
    n_time_points: int = 20
    cluster_distance: float = 5.0
    jitter_sigma: float = 0.5
    max_jumps: int = 20
    seed: int = 0
    repeat_jumpers: bool = True
    enforce_separation: bool = True

    def __post_init__(self):
        if int(self.n_items) != self.n_items or self.n_items < 4:
            raise InvalidConfig(f"n_items must be an integer >= 4, got {self.n_items}")
        if int(self.n_time_points) != self.n_time_points or self.n_time_points < 2:
            raise InvalidConfig(f"n_time_points must be an integer >= 2, got {self.n_time_points}")
        if not self.cluster_distance > 0:
            raise InvalidConfig("cluster_distance must be positive")
        if not self.jitter_sigma >= 0:
            raise InvalidConfig("jitter_sigma must be non-negative")
        if self.enforce_separation and not self.jitter_sigma < self.cluster_distance:
            raise InvalidConfig("jitter_sigma must be smaller than cluster_distance")
        if int(self.max_jumps) != self.max_jumps or self.max_jumps < 0:
            raise InvalidConfig("max_jumps must be a non-negative integer")
        if not 0 <= int(self.seed) < 2**64:
            raise InvalidConfig("seed must fit in an unsigned 64-bit integer")


@dataclass(frozen=True, eq=False)
class GroundTruthTrace:
    """True quadrant label of every item at every time point, plus injected jump counts."""

    labels: np.ndarray  # (n_items, n_time_points)
    jump_counts: tuple[int, ...]  # one per step, len == n_time_points - 1
    time_points: tuple[int, ...]

    def partition(self, j: int, item_ids) -> Partition:
        return Partition(tuple(item_ids), self.labels[:, j], 4, time_point=self.time_points[j])

    def changes(self) -> np.ndarray:
        """Number of items whose label differs between consecutive time points."""
        return (self.labels[:, 1:] != self.labels[:, :-1]).sum(axis=0)


def generate(cfg: SynthConfig) -> tuple[TemporalDataset, GroundTruthTrace]:
    rng = np.random.default_rng(int(cfg.seed))
    n, T, d = cfg.n_items, cfg.n_time_points, float(cfg.cluster_distance)

    signs = QUADRANT_SIGNS[np.arange(n) % 4].copy()
    values = np.empty((n, T, 2))
    labels = np.empty((n, T), dtype=np.int64)
    values[:, 0] = signs * d + rng.normal(0.0, cfg.jitter_sigma, size=(n, 2))
    labels[:, 0] = quadrant_label(signs[:, 0], signs[:, 1])

    jumped = np.zeros(n, dtype=bool)
    jump_counts = []
    for t in range(1, T):
        j = int(rng.integers(0, cfg.max_jumps + 1))
        pool = np.arange(n) if cfg.repeat_jumpers else np.flatnonzero(~jumped)
        j = min(j, len(pool))
        who = rng.choice(pool, size=j, replace=False) if j else np.empty(0, dtype=np.int64)
        kinds = rng.integers(0, 3, size=j)
        signs[who] *= _FLIPS[kinds]
        jumped[who] = True
        jump_counts.append(j)
        values[:, t] = signs * d + rng.normal(0.0, cfg.jitter_sigma, size=(n, 2))
        labels[:, t] = quadrant_label(signs[:, 0], signs[:, 1])

    time_points = tuple(range(1, T + 1))
    ds = TemporalDataset(tuple(str(i) for i in range(n)), time_points, ("x", "y"), values)
    labels.setflags(write=False)
    return ds, GroundTruthTrace(labels, tuple(jump_counts), time_points)


def evaluate_recovery(ds: TemporalDataset, trace: GroundTruthTrace, cfg: KMeansConfig | None = None) -> float:
    """Fraction of time points where k-means reproduces the true quadrants up to relabeling."""
    cfg = cfg or KMeansConfig(k=4)
    parts = cluster_all(ds, cfg)
    hits = 0
    for j, p in enumerate(parts):
        truth = trace.labels[:, j]
        if len(np.unique(truth)) != p.k:
            continue
        hits += same_partition(p, trace.partition(j, ds.item_ids))
    return hits / len(parts)
