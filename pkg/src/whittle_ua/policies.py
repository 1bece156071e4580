"""The six association policies under a uniform decision interface.

Every policy maps the current per-BS state vector to the BS that should
admit an arriving user.  BSs already at n_max are excluded from every
candidate set; ties are broken uniformly at random with the caller's rng.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import NetworkConfig
from .whittle import WhittleTable

POLICY_NAMES = ("whittle", "random", "load", "snr", "throughput", "mixed")


class AllBlockedError(RuntimeError):
    """Every BS is at n_max; the arrival cannot be placed."""


@dataclass
class PolicyKind:
    name: str
    table: WhittleTable | None = None
    mixed_weight: float = 0.2

    def __post_init__(self):
        if self.name not in POLICY_NAMES:
            raise ValueError(f"unknown policy {self.name!r}; expected one of {POLICY_NAMES}")
        if self.name == "whittle" and self.table is None:
            raise ValueError("whittle policy requires an index table")
        if self.mixed_weight <= 0.0:
            raise ValueError(f"mixed weight must be positive, got {self.mixed_weight}")


def bs_rates(config: NetworkConfig) -> np.ndarray:
    """Average per-slot data rate proxy of each BS, M*(q*r + (1-q)*r')."""
    return np.array([bs.service_rate(config.m) for bs in config.bs])


def decide(kind: PolicyKind, states: np.ndarray, config: NetworkConfig,
           rng: np.random.Generator) -> int:
    """Pick the BS for an arriving user; raises AllBlockedError if all are full."""
    states = np.asarray(states)
    open_mask = states < config.n_max
    if not open_mask.any():
        raise AllBlockedError("all BSs are at n_max")

    if kind.name == "random":
        return _pick(np.flatnonzero(open_mask), rng)

    if kind.name == "whittle":
        score = kind.table.per_bs[np.arange(config.k), states]
        return _argbest(-score, open_mask, rng)
    if kind.name == "load":
        return _argbest(-states.astype(float), open_mask, rng)

    rates = bs_rates(config)
    if kind.name == "snr":
        score = rates
    elif kind.name == "throughput":
        score = rates / (states + 1.0)
    else:  # mixed
        score = rates * (kind.mixed_weight + 1.0 / (states + 1.0))
    return _argbest(score, open_mask, rng)


def _argbest(score: np.ndarray, open_mask: np.ndarray,
             rng: np.random.Generator) -> int:
    score = np.where(open_mask, score, -np.inf)
    best = np.flatnonzero(score == score.max())
    return _pick(best, rng)


def _pick(cands: np.ndarray, rng: np.random.Generator) -> int:
    if len(cands) == 1:
        return int(cands[0])
    return int(cands[rng.integers(len(cands))])
