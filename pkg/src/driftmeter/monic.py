"""MONIC-style cluster transition tracking between consecutive time points.

For each old cluster X at t and new cluster Y at t+1::

    overlap(X, Y) = sum(w_i for i in X & Y) / sum(w_i for i in X)

X survives into the Y with the largest overlap when that overlap reaches
``tau_match``; otherwise X disappears.  New clusters nobody survived into
have appeared.

Item weights implement the aging function.  An item that is new to X's
lineage at t weighs ``current_weight``; an item whose membership was carried
over from the cluster X continued at t-1 weighs ``previous_weight``.  With a
horizon of two time points nothing older than t-1 is consulted.  The first
pair has no history, so every item weighs ``current_weight`` there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .clustering import KMeansConfig, Partition, cluster_all
from .dataset import TemporalDataset
from .errors import InvalidConfig, InvalidThreshold

__all__ = ["AgingPolicy", "Transition", "TransitionReport", "track", "track_partitions", "transition"]


@dataclass(frozen=True)
class AgingPolicy:
    current_weight: float = 1.0
    previous_weight: float = 0.5
    horizon: int | None = 2  # None: unlimited

    def __post_init__(self):
        if not (self.current_weight > 0 and math.isfinite(self.current_weight)):
            raise InvalidConfig("current_weight must be positive")
        if not 0 < self.previous_weight <= 1:
            raise InvalidConfig("previous_weight must lie in (0, 1]")
        if self.horizon is not None and self.horizon < 2:
            raise InvalidConfig("horizon must be at least 2 time points (or None)")

    @classmethod
    def no_aging(cls) -> "AgingPolicy":
        return cls(current_weight=1.0, previous_weight=1.0, horizon=None)


@dataclass
class Transition:
    t: int
    t_next: int
    survived: int
    appeared: int
    disappeared: int
    # (old cluster, best new cluster, weighted overlap) for every old cluster
    matches: list[tuple[int, int, float]] = field(default_factory=list)
    survivors: dict[int, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "t_next": self.t_next,
            "survived": self.survived,
            "appeared": self.appeared,
            "disappeared": self.disappeared,
            "matches": [{"old": o, "new": n, "overlap": r} for o, n, r in self.matches],
        }


@dataclass
class TransitionReport:
    transitions: list[Transition]
    tau_match: float
    policy: AgingPolicy

    def rows(self) -> list[tuple[int, int, int, int]]:
        return [(tr.t, tr.survived, tr.appeared, tr.disappeared) for tr in self.transitions]

    def to_dict(self) -> dict:
        return {
            "tau_match": self.tau_match,
            "policy": {
                "current_weight": self.policy.current_weight,
                "previous_weight": self.policy.previous_weight,
                "horizon": self.policy.horizon,
            },
            "transitions": [tr.to_dict() for tr in self.transitions],
        }


def _check_tau(tau_match: float) -> float:
    tau = float(tau_match)
    if not (0 < tau <= 1):
        raise InvalidThreshold(f"tau_match must lie in (0, 1], got {tau_match}")
    return tau


def transition(old: Partition, new: Partition, weights: np.ndarray, tau_match: float) -> Transition:
    """Match the clusters of ``old`` to those of ``new`` with per-item ``weights``."""
    tau = _check_tau(tau_match)
    weights = np.asarray(weights, dtype=float)
    matches: list[tuple[int, int, float]] = []
    survivors: dict[int, int] = {}
    for x in range(old.k):
        in_x = old.labels == x
        total = weights[in_x].sum()
        # overlap per new cluster; bincount sums in item order, so ties and values are reproducible
        num = np.bincount(new.labels[in_x], weights=weights[in_x], minlength=new.k)
        ratios = num / total if total > 0 else np.zeros(new.k)
        y = int(np.argmax(ratios))  # lowest index on ties
        r = float(ratios[y])
        matches.append((x, y, r))
        if r >= tau:
            survivors[x] = y
    matched_new = set(survivors.values())
    return Transition(
        t=old.time_point,
        t_next=new.time_point,
        survived=len(survivors),
        appeared=new.k - len(matched_new),
        disappeared=old.k - len(survivors),
        matches=matches,
        survivors=survivors,
    )


def track_partitions(partitions: Sequence[Partition], policy: AgingPolicy | None = None,
                     tau_match: float = 0.5) -> TransitionReport:
    policy = policy or AgingPolicy()
    tau = _check_tau(tau_match)
    out: list[Transition] = []
    prev_survivors: dict[int, int] | None = None
    for j in range(len(partitions) - 1):
        old, new = partitions[j], partitions[j + 1]
        weights = np.full(old.n, policy.current_weight)
        if prev_survivors is not None:
            before = partitions[j - 1]
            # item i is carried over if its cluster at t-1 survived into its cluster at t
            continued = np.array([prev_survivors.get(int(a), -1) for a in before.labels.tolist()])
            carried = continued == old.labels
            weights[carried] = policy.previous_weight
        tr = transition(old, new, weights, tau)
        out.append(tr)
        prev_survivors = tr.survivors
    return TransitionReport(out, tau, policy)


def track(ds: TemporalDataset, cfg: KMeansConfig, policy: AgingPolicy | None = None,
          tau_match: float = 0.5) -> TransitionReport:
    _check_tau(tau_match)
    return track_partitions(cluster_all(ds, cfg), policy, tau_match)
