"""System model primitives: per-BS parameters, departure law, transition kernels.

A slot is subdivided into M mini-slots. In each slot the channel of a BS is
jammed with probability q, in which case the per-mini-slot departure
probability drops from r' to r. A departure can occur in a mini-slot only
while the BS is nonempty, so the number of departures D from state x is
min(x, Binomial(M, r_eff)) in distribution, with the boundary mass at
d = min(x, M) aggregating the binomial tail.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.stats import binom


@dataclass(frozen=True)
class BsParams:
    """Jamming/departure/cost parameters of one base station.

    q: probability the channel is jammed in a slot, in (0, 1).
    r: per-mini-slot departure probability while jammed.
    r_prime: per-mini-slot departure probability while clear; r < r_prime.
    c: holding cost per associated user per slot, > 0.
    """

    q: float
    r: float
    r_prime: float
    c: float

    def __post_init__(self):
        if not 0.0 < self.q < 1.0:
            raise ValueError(f"q must be in (0, 1), got {self.q}")
        if not 0.0 <= self.r < self.r_prime <= 1.0:
            raise ValueError(
                f"need 0 <= r < r_prime <= 1, got r={self.r}, r_prime={self.r_prime}"
            )
        if self.c < 0.0:
            # c = 0 is outside the model proper but useful as a degenerate
            # check case (zero cost makes every index zero)
            raise ValueError(f"holding cost must be non-negative, got {self.c}")

    def service_rate(self, m: int) -> float:
        """Average departures per slot, M * (q*r + (1-q)*r')."""
        return m * (self.q * self.r + (1.0 - self.q) * self.r_prime)


@dataclass(frozen=True)
class NetworkConfig:
    """Full experiment description for a K-BS network."""

    k: int
    m: int
    p: float
    bs: tuple[BsParams, ...]
    n_max: int = 200
    horizon: int = 20_000
    measure_window: int = 10_000
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "bs", tuple(self.bs))
        if self.k < 1 or len(self.bs) != self.k:
            raise ValueError(f"need k >= 1 BsParams entries, got k={self.k}, "
                             f"len(bs)={len(self.bs)}")
        if self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")
        if not 0.0 < self.p < 1.0:
            raise ValueError(f"p must be in (0, 1), got {self.p}")
        if self.n_max < 1:
            raise ValueError(f"n_max must be >= 1, got {self.n_max}")
        if not 0 < self.measure_window <= self.horizon:
            raise ValueError(
                f"need 0 < measure_window <= horizon, got "
                f"measure_window={self.measure_window}, horizon={self.horizon}"
            )


def departure_pmf(x: int, params: BsParams, m: int) -> np.ndarray:
    """PMF of the number of per-slot departures from state x.

    Returns an array of length min(x, m) + 1 indexed by d.  Interior
    entries are the jam-state mixture of Binomial(m, r) and
    Binomial(m, r'); the last entry aggregates the binomial tail, since
    at most min(x, m) users can leave.
    """
    if x < 0:
        raise ValueError(f"state must be non-negative, got {x}")
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if x == 0:
        return np.array([1.0])
    d_max = min(x, m)
    d = np.arange(d_max + 1)
    mix = params.q * binom.pmf(d, m, params.r) \
        + (1.0 - params.q) * binom.pmf(d, m, params.r_prime)
    probs = mix.copy()
    # tail aggregation: P(D = d_max) = P(successes >= d_max)
    probs[d_max] = params.q * binom.sf(d_max - 1, m, params.r) \
        + (1.0 - params.q) * binom.sf(d_max - 1, m, params.r_prime)
    return probs


@lru_cache(maxsize=128)
def transition_kernels(params: BsParams, m: int, p: float,
                       n_max: int) -> tuple[np.ndarray, np.ndarray]:
    """Dense one-slot transition matrices for the accept and reject actions.

    Rows are indexed by the current state x in {0..n_max}.  Under accept
    the next state is x - D + Bernoulli(p); under reject it is x - D.
    Accept transitions that would exceed n_max are redirected to n_max,
    which keeps the kernel stochastic under truncation.

    Cached (treat the returned arrays as read-only); kernel construction
    dominates the index-table build otherwise.
    """
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must be in (0, 1), got {p}")
    n = n_max + 1
    d = np.arange(m + 1)
    mix = params.q * binom.pmf(d, m, params.r) \
        + (1.0 - params.q) * binom.pmf(d, m, params.r_prime)
    tail = params.q * binom.sf(d - 1, m, params.r) \
        + (1.0 - params.q) * binom.sf(d - 1, m, params.r_prime)
    p_acc = np.zeros((n, n))
    p_rej = np.zeros((n, n))
    p_rej[0, 0] = 1.0
    p_acc[0, 0] = 1.0 - p
    p_acc[0, 1] = p
    for x in range(1, n):
        d_max = min(x, m)
        pmf = np.append(mix[:d_max], tail[d_max])
        for dd, pd in enumerate(pmf):
            p_rej[x, x - dd] += pd
            p_acc[x, x - dd] += (1.0 - p) * pd
            p_acc[x, min(x - dd + 1, n_max)] += p * pd
    p_acc.setflags(write=False)
    p_rej.setflags(write=False)
    return p_acc, p_rej


def stability_margin(config: NetworkConfig) -> float:
    """Slack of the positive-recurrence condition, in users per slot.

    Returns min_i M*(q_i r_i + (1-q_i) r_i') - p.  A positive value means
    the arrival rate is below every BS's average departure rate, so the
    induced chain of each BS is positive recurrent.
    """
    rates = [bs.service_rate(config.m) for bs in config.bs]
    return min(rates) - config.p
