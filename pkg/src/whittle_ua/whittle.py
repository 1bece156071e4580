"""Whittle index computation.

The index of state x is the tax at which accepting and rejecting an
arrival are equally costly under the optimal policy.  It is computed by
the damped fixed-point iteration

    lam_{tau+1} = lam_tau + gamma * (acc_cont(x) - rej_cont(x) - lam_tau),

where the continuations are taken under the value function of the
threshold-x policy, re-solved exactly after every step.  An independent
bisection oracle (on the greedy action of the full average-cost solve)
cross-checks the iteration.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .model import BsParams, NetworkConfig, transition_kernels
from .solver import rvi_solve, threshold_system


class IndexComputationError(RuntimeError):
    """Index computation failure; carries the last iterate for diagnosis."""

    def __init__(self, msg, last_lam=None, gap=None):
        super().__init__(msg)
        self.last_lam = last_lam
        self.gap = gap


@dataclass(frozen=True)
class IndexIterConfig:
    gamma: float = 0.1
    tol: float = 1e-6
    max_iter: int = 10**5
    lambda0: float = 0.0

    def __post_init__(self):
        if self.gamma <= 0.0 or self.tol <= 0.0:
            raise ValueError("gamma and tol must be positive")


@dataclass
class WhittleTable:
    """Per-BS state -> index map; decision surface of the Whittle policy."""

    per_bs: np.ndarray            # shape (K, n_max + 1)
    computed_states: np.ndarray   # states where the iteration was run


def index_iterative(params: BsParams, m: int, p: float, x: int, n_max: int,
                    cfg: IndexIterConfig = IndexIterConfig()) -> float:
    """Whittle index of state x via the tax-update iteration.

    The inner linear system (threshold-x policy, V(0) = 0) has a
    lam-independent matrix, so it is factored once and re-solved per step.
    """
    if not 0 <= x <= n_max:
        raise ValueError(f"state must be in [0, {n_max}], got {x}")
    p_acc, p_rej = transition_kernels(params, m, p, n_max)
    a, b0, b1 = threshold_system(params, m, p, x, n_max)
    lu = lu_factor(a)
    row_diff = p_acc[x] - p_rej[x]
    lam = cfg.lambda0
    for _ in range(cfg.max_iter):
        v = lu_solve(lu, b0 + lam * b1)[:-1]
        gap = float(row_diff @ v) - lam
        lam_next = lam + cfg.gamma * gap
        if abs(lam_next - lam) < cfg.tol:
            return lam_next
        lam = lam_next
    raise IndexComputationError(
        f"index iteration did not converge for state {x} "
        f"(last lam {lam:.6g}, gap {gap:.3e})", last_lam=lam, gap=gap)


def index_bisection(params: BsParams, m: int, p: float, x: int, n_max: int,
                    tol: float = 1e-6) -> float:
    """Independent index oracle: bisect the tax at which the greedy action flips.

    Solves the full average-cost problem at each probe tax and compares the
    two bracketed DPE expressions at state x; indexability makes the accept
    decision at x monotone in the tax, so the switching point is the
    Whittle index.
    """
    if not 0 <= x <= n_max:
        raise ValueError(f"state must be in [0, {n_max}], got {x}")
    p_acc, p_rej = transition_kernels(params, m, p, n_max)

    def accepts(lam: float) -> bool:
        sol = rvi_solve(params, m, p, lam, n_max)
        return p_acc[x] @ sol.v <= lam + p_rej[x] @ sol.v + 1e-12

    scale = max(params.c * n_max, 1.0)
    lo, hi = -scale, scale * m
    for _ in range(60):
        if not accepts(lo) and accepts(hi):
            break
        lo, hi = 2.0 * lo, 2.0 * hi
    else:
        raise IndexComputationError(f"no action switch found in [{lo}, {hi}] for state {x}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if accepts(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


@lru_cache(maxsize=256)
def index_sequence(params: BsParams, m: int, p: float, n_max: int,
                   stride: int = 1,
                   cfg: IndexIterConfig = IndexIterConfig()) -> tuple[np.ndarray, np.ndarray]:
    """Index values for states 0..n_max of one BS, iterating every `stride`-th
    state and linearly interpolating the rest.

    Returns (indices, computed_states).  Consecutive states warm-start from
    the previous index.  Cached so that repeated BSs (identical parameters,
    e.g. across sweep values) are computed once.

    At the truncation boundary x = n_max the accept transition is clipped,
    which deflates the iterated value and can break monotonicity; a BS at
    n_max is blocked and its index is never consulted, so that entry is
    replaced by linear extrapolation whenever it falls below its neighbor.
    """
    if stride < 1:
        raise ValueError(f"stride must be >= 1, got {stride}")
    computed = list(range(0, n_max + 1, stride))
    if computed[-1] != n_max:
        computed.append(n_max)
    computed = np.array(computed)
    vals = np.empty(len(computed))
    lam0 = cfg.lambda0
    for j, x in enumerate(computed):
        vals[j] = index_iterative(
            params, m, p, int(x), n_max,
            IndexIterConfig(cfg.gamma, cfg.tol, cfg.max_iter, lam0))
        lam0 = vals[j]
    if len(vals) >= 3 and vals[-1] < vals[-2]:
        vals[-1] = vals[-2] + (vals[-2] - vals[-3]) \
            * (computed[-1] - computed[-2]) / (computed[-2] - computed[-3])
    elif len(vals) == 2 and vals[-1] < vals[-2]:
        vals[-1] = vals[-2]
    indices = np.interp(np.arange(n_max + 1), computed, vals)
    return indices, computed


def build_table(config: NetworkConfig, stride: int = 1,
                cfg: IndexIterConfig = IndexIterConfig()) -> WhittleTable:
    """Whittle index table for every BS of the network."""
    per_bs = np.empty((config.k, config.n_max + 1))
    computed = None
    for i, bs in enumerate(config.bs):
        per_bs[i], computed = index_sequence(bs, config.m, config.p,
                                             config.n_max, stride, cfg)
    return WhittleTable(per_bs=per_bs, computed_states=computed)


def write_table_csv(table: WhittleTable, path: str) -> None:
    """Export as CSV with columns bs_id, state, index, computed_flag."""
    computed = set(int(s) for s in table.computed_states)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["bs_id", "state", "index", "computed_flag"])
        for i, row in enumerate(table.per_bs):
            for x, val in enumerate(row):
                writer.writerow([i, x, repr(float(val)), int(x in computed)])
