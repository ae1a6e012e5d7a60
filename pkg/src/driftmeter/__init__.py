"""Measure how much items change cluster membership across time points.

Each time point is clustered on its own (k-means, one shared configuration);
partitions are then compared with external cluster validity indices
(Jaccard, Rand, Fowlkes-Mallows, variation of information) and a
Hand & Till multi-class AUC, either against the first time point or between
consecutive ones.
"""

__version__ = "0.1.0"

from .auc import align, binary_auc, multiclass_auc
from .clustering import KMeansConfig, Partition, cluster_all, kmeans
from .dataset import TemporalDataset, TimeSlice, ingest_csv, write_csv
from .drift import DriftConfig, DriftSeries, fit_trend, measure
from .game import payoff, simulate
from .monic import AgingPolicy, TransitionReport, track
from .synthgen import GroundTruthTrace, SynthConfig, evaluate_recovery, generate
from .validity import (
    contingency,
    fowlkes_mallows,
    jaccard,
    pair_counts,
    rand,
    scaled_reversed_vi,
    variation_of_information,
)

__all__ = [
    "AgingPolicy",
    "DriftConfig",
    "DriftSeries",
    "GroundTruthTrace",
    "KMeansConfig",
    "Partition",
    "SynthConfig",
    "TemporalDataset",
    "TimeSlice",
    "TransitionReport",
    "align",
    "binary_auc",
    "cluster_all",
    "contingency",
    "evaluate_recovery",
    "fit_trend",
    "fowlkes_mallows",
    "generate",
    "ingest_csv",
    "jaccard",
    "kmeans",
    "measure",
    "multiclass_auc",
    "pair_counts",
    "payoff",
    "rand",
    "scaled_reversed_vi",
    "simulate",
    "track",
    "variation_of_information",
    "write_csv",
]
