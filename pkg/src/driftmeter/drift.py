"""Cluster every time point, compare partitions over time, fit a linear trend.

Two comparison schemes are supported:

* ``first_vs_rest``: the first time point's clusters stand in for ground
  truth and every later time point is compared against them;
* ``consecutive``: each time point is compared with the one before it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .auc import multiclass_auc
from .clustering import KMeansConfig, Partition, cluster_all
from .dataset import TemporalDataset
from .errors import DegenerateRegression, IndexUnavailable, InvalidConfig
from .validity import (
    contingency,
    fowlkes_mallows,
    jaccard,
    pair_counts,
    rand,
    scaled_reversed_vi,
    variation_of_information,
)

__all__ = ["INDICES", "MODES", "DriftConfig", "DriftSeries", "measure", "compare", "fit_trend", "parse_indices"]

INDICES = ("jaccard", "rand", "fm", "vi", "scaled_vi", "auc")
MODES = ("first_vs_rest", "consecutive")
MODE_ALIASES = {"first": "first_vs_rest", "first_vs_rest": "first_vs_rest", "consecutive": "consecutive"}


def parse_indices(text: str | Iterable[str]) -> tuple[str, ...]:
    names = text.split(",") if isinstance(text, str) else list(text)
    names = [n.strip().lower() for n in names if n.strip()]
    unknown = [n for n in names if n not in INDICES]
    if unknown:
        raise InvalidConfig(f"unknown index name(s): {', '.join(unknown)}; choose from {', '.join(INDICES)}")
    # canonical order, duplicates dropped
    return tuple(n for n in INDICES if n in names)


@dataclass(frozen=True)
class DriftConfig:
    mode: str = "first_vs_rest"
    indices: tuple[str, ...] = INDICES
    kmeans: KMeansConfig = field(default_factory=KMeansConfig)

    def __post_init__(self):
        mode = MODE_ALIASES.get(self.mode)
        if mode is None:
            raise InvalidConfig(f"mode must be one of {MODES}, got {self.mode!r}")
        object.__setattr__(self, "mode", mode)
        indices = parse_indices(self.indices)
        if not indices:
            raise InvalidConfig("at least one index must be requested")
        if "scaled_vi" in indices and "vi" not in indices:
            raise IndexUnavailable("scaled_vi is derived from the VI series; request vi as well")
        object.__setattr__(self, "indices", indices)


@dataclass
class DriftSeries:
    mode: str
    comparisons: list[tuple[int, int]]
    values: dict[str, list[float]]
    slopes: dict[str, float | None]
    intercepts: dict[str, float | None] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "comparisons": [list(c) for c in self.comparisons],
            "series": {k: list(v) for k, v in self.values.items()},
            "slopes": dict(self.slopes),
        }


def fit_trend(xs: Sequence[float], ys: Sequence[float]) -> tuple[float, float]:
    """Ordinary least squares line ``y = slope * x + intercept``."""
    if len(xs) != len(ys):
        raise DegenerateRegression("xs and ys differ in length")
    if len(xs) < 2:
        raise DegenerateRegression("a trend needs at least two points")
    n = len(xs)
    mx = math.fsum(xs) / n
    my = math.fsum(ys) / n
    sxx = math.fsum((x - mx) ** 2 for x in xs)
    if sxx == 0:
        raise DegenerateRegression("all x values are equal")
    sxy = math.fsum((x - mx) * (y - my) for x, y in zip(xs, ys))
    slope = sxy / sxx
    return slope, my - slope * mx


def _pairs(partitions: Sequence[Partition], mode: str):
    if mode == "first_vs_rest":
        return [(0, j) for j in range(1, len(partitions))]
    return [(j - 1, j) for j in range(1, len(partitions))]


def compare(reference: Partition, comparison: Partition, indices: Iterable[str]) -> dict[str, float]:
    """Requested indices for one (reference, comparison) pair; ``scaled_vi`` is not per-pair."""
    indices = set(indices)
    out: dict[str, float] = {}
    ct = contingency(reference, comparison)
    if indices & {"jaccard", "rand", "fm"}:
        pc = pair_counts(ct)
        if "jaccard" in indices:
            out["jaccard"] = jaccard(pc)
        if "rand" in indices:
            out["rand"] = rand(pc)
        if "fm" in indices:
            out["fm"] = fowlkes_mallows(pc)
    if "vi" in indices:
        out["vi"] = variation_of_information(ct)
    if "auc" in indices:
        out["auc"] = multiclass_auc(reference, comparison)
    return out


def measure_partitions(partitions: Sequence[Partition], time_points: Sequence[int], cfg: DriftConfig) -> DriftSeries:
    pairs = _pairs(partitions, cfg.mode)
    comparisons = [(time_points[a], time_points[b]) for a, b in pairs]
    values: dict[str, list[float]] = {name: [] for name in cfg.indices}
    for a, b in pairs:
        row = compare(partitions[a], partitions[b], cfg.indices)
        for name, v in row.items():
            values[name].append(v)
    if "scaled_vi" in cfg.indices:
        values["scaled_vi"] = scaled_reversed_vi(values["vi"]) if values["vi"] else []

    xs = [float(t) for _, t in comparisons]
    slopes: dict[str, float | None] = {}
    intercepts: dict[str, float | None] = {}
    for name in cfg.indices:
        if len(xs) >= 2:
            slopes[name], intercepts[name] = fit_trend(xs, values[name])
        else:
            slopes[name] = intercepts[name] = None
    return DriftSeries(cfg.mode, comparisons, values, slopes, intercepts)


def measure(ds: TemporalDataset, cfg: DriftConfig) -> DriftSeries:
    """Full pipeline: one shared k-means config across time points, then per-pair indices and slopes."""
    partitions = cluster_all(ds, cfg.kmeans)
    return measure_partitions(partitions, ds.time_points, cfg)
