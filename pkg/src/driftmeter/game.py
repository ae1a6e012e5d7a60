"""Public goods game arithmetic and an archetype-driven panel simulator.

Four players share a project each round; player i keeps
``20 - g_i + 0.4 * sum(g)`` tokens.

The simulator only aims at the *shape* of experimental data (4-player
groups rematched every round, contribution and belief in [0, 20]).  Each
round, in this draw order from one seeded generator:

1. (from round 2) one uniform per player decides archetype switches, then
   one draw per switcher picks the new archetype;
2. a permutation forms the groups of four;
3. one standard normal per player feeds the archetype's noise term.

Beliefs are the mean contribution of the other three group members in the
previous round; in round 1 they come from the archetype's prior.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .dataset import TemporalDataset
from .errors import InvalidConfig, InvalidMix, OutOfRangeContribution

__all__ = [
    "ENDOWMENT",
    "GROUP_SIZE",
    "MPCR",
    "ARCHETYPES",
    "DEFAULT_MIX",
    "StrategyArchetype",
    "SimulationTrace",
    "payoff",
    "group_payoffs",
    "simulate",
    "simulate_trace",
]

ENDOWMENT = 20
GROUP_SIZE = 4
MPCR = Fraction(2, 5)  # marginal per-capita return, 0.4

ARCHETYPES = ("conditional_cooperator", "free_rider", "triangle", "noisy")


@dataclass(frozen=True)
class StrategyArchetype:
    kind: str
    params: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in ARCHETYPES:
            raise InvalidConfig(f"unknown archetype {self.kind!r}")

    def contribute(self, belief: np.ndarray, noise: np.ndarray) -> np.ndarray:
        p = self.params
        sd = p.get("noise", 0.0)
        if self.kind == "free_rider":
            raw = np.zeros_like(belief)
        elif self.kind == "conditional_cooperator":
            raw = p.get("offset", 0.0) + p.get("slope", 1.0) * belief + sd * noise
        elif self.kind == "triangle":
            peak = p.get("peak", 10.0)
            rise = p.get("slope", 1.0) * belief
            raw = np.where(belief <= peak, rise, p.get("slope", 1.0) * (2 * peak - belief)) + sd * noise
        else:
            raw = p.get("center", 10.0) + sd * noise
        return np.clip(np.rint(raw), 0, ENDOWMENT)

    @property
    def prior_belief(self) -> float:
        return float(self.params.get("prior_belief", 10.0))


DEFAULT_ARCHETYPES: dict[str, StrategyArchetype] = {
    "conditional_cooperator": StrategyArchetype(
        "conditional_cooperator", {"slope": 1.0, "offset": 8.0, "noise": 1.0, "prior_belief": 12.0}),
    "free_rider": StrategyArchetype("free_rider", {"prior_belief": 6.0}),
    "triangle": StrategyArchetype("triangle", {"peak": 6.0, "slope": 0.5, "noise": 0.5, "prior_belief": 10.0}),
    "noisy": StrategyArchetype("noisy", {"center": 10.0, "noise": 1.0, "prior_belief": 10.0}),
}

BELIEF_UPDATE = 0.5

# Shares close to those usually reported for one-shot contribution tables.
DEFAULT_MIX = {"conditional_cooperator": 0.5, "free_rider": 0.3, "triangle": 0.1, "noisy": 0.1}


def _check_contribution(g) -> int:
    if isinstance(g, bool) or int(g) != g:
        raise OutOfRangeContribution(f"contribution {g!r} is not a whole number of tokens")
    g = int(g)
    if not 0 <= g <= ENDOWMENT:
        raise OutOfRangeContribution(f"contribution {g} outside [0, {ENDOWMENT}]")
    return g


def payoff(own, all_contributions: Sequence) -> float:
    """Tokens kept by a player contributing ``own`` in a group contributing ``all_contributions``.

    ``all_contributions`` includes the player's own contribution.
    """
    own = _check_contribution(own)
    gs = [_check_contribution(g) for g in all_contributions]
    if len(gs) != GROUP_SIZE:
        raise OutOfRangeContribution(f"a group has {GROUP_SIZE} contributions, got {len(gs)}")
    if own not in gs:
        raise OutOfRangeContribution("own contribution must be one of the group's contributions")
    return float(ENDOWMENT - own + MPCR * sum(gs))


def group_payoffs(contributions: Sequence) -> list[float]:
    gs = [_check_contribution(g) for g in contributions]
    return [payoff(g, gs) for g in gs]


def _validate_mix(mix: Mapping[str, float]) -> np.ndarray:
    unknown = [k for k in mix if k not in ARCHETYPES]
    if unknown:
        raise InvalidMix(f"unknown archetype(s) in mix: {', '.join(unknown)}")
    p = np.array([float(mix.get(k, 0.0)) for k in ARCHETYPES])
    if (p < 0).any() or not np.all(np.isfinite(p)):
        raise InvalidMix("mix proportions must be finite and non-negative")
    if not math.isclose(p.sum(), 1.0, abs_tol=1e-9):
        raise InvalidMix(f"mix proportions sum to {p.sum():.6g}, not 1")
    return p / p.sum()


@dataclass(frozen=True, eq=False)
class SimulationTrace:
    dataset: TemporalDataset
    archetypes: np.ndarray  # (players, rounds) index into ARCHETYPES
    groups: np.ndarray  # (rounds, n_groups, 4) player indices
    payoffs: np.ndarray  # (players, rounds)


def simulate_trace(n_players: int, n_rounds: int, archetype_mix: Mapping[str, float] | None = None,
                   drift_rate: float = 0.0, seed: int = 0, decay: float = 0.0,
                   belief_update: float = BELIEF_UPDATE,
                   archetypes: Mapping[str, StrategyArchetype] | None = None) -> SimulationTrace:
    """Simulate a game and keep the generator-side detail (archetypes, groups, payoffs).

    ``decay`` lowers every contribution by ``decay * (round - 1)`` tokens before
    clamping, a crude stand-in for the end-game decline; 0 disables it.
    """
    if int(n_players) != n_players or n_players < 8 or n_players % GROUP_SIZE:
        raise InvalidConfig(f"n_players must be a multiple of {GROUP_SIZE} and at least 8, got {n_players}")
    if int(n_rounds) != n_rounds or n_rounds < 2:
        raise InvalidConfig(f"n_rounds must be an integer >= 2, got {n_rounds}")
    if not 0 <= drift_rate <= 1:
        raise InvalidConfig(f"drift_rate must lie in [0, 1], got {drift_rate}")
    if decay < 0:
        raise InvalidConfig("decay must be non-negative")
    if not 0 < belief_update <= 1:
        raise InvalidConfig(f"belief_update must lie in (0, 1], got {belief_update}")
    mix = _validate_mix(DEFAULT_MIX if archetype_mix is None else archetype_mix)
    table = dict(DEFAULT_ARCHETYPES)
    table.update(archetypes or {})
    kinds = [table[k] for k in ARCHETYPES]

    rng = np.random.default_rng(int(seed))
    n, R = int(n_players), int(n_rounds)
    kind = rng.choice(len(ARCHETYPES), size=n, p=mix)
    belief = np.array([kinds[a].prior_belief for a in kind], dtype=float)

    values = np.empty((n, R, 2))
    arch = np.empty((n, R), dtype=np.int64)
    groups = np.empty((R, n // GROUP_SIZE, GROUP_SIZE), dtype=np.int64)
    pay = np.empty((n, R))

    for r in range(R):
        if r > 0:
            switch = rng.random(n) < drift_rate
            for i in np.flatnonzero(switch):
                others = mix.copy()
                others[kind[i]] = 0.0
                if others.sum() > 0:
                    kind[i] = rng.choice(len(ARCHETYPES), p=others / others.sum())
        order = rng.permutation(n)
        grp = order.reshape(-1, GROUP_SIZE)
        noise = rng.standard_normal(n)

        contrib = np.empty(n)
        for a, archetype in enumerate(kinds):
            idx = kind == a
            if idx.any():
                contrib[idx] = archetype.contribute(belief[idx], noise[idx])
        if decay:
            contrib = np.clip(contrib - np.rint(decay * r), 0, ENDOWMENT)

        values[:, r, 0] = contrib
        values[:, r, 1] = belief
        arch[:, r] = kind
        groups[r] = grp

        next_belief = np.empty(n)
        for members in grp:
            gs = contrib[members]
            total = gs.sum()
            for m, g in zip(members, gs):
                pay[m, r] = ENDOWMENT - g + 2 * total / 5
                next_belief[m] = (total - g) / (GROUP_SIZE - 1)
        belief = (1 - belief_update) * belief + belief_update * next_belief

    ds = TemporalDataset(tuple(str(i + 1) for i in range(n)), tuple(range(1, R + 1)),
                         ("contribution", "belief"), values)
    return SimulationTrace(ds, arch, groups, pay)


def simulate(n_players: int, n_rounds: int, archetype_mix: Mapping[str, float] | None = None,
             drift_rate: float = 0.0, seed: int = 0, decay: float = 0.0) -> TemporalDataset:
    return simulate_trace(n_players, n_rounds, archetype_mix, drift_rate, seed, decay).dataset
