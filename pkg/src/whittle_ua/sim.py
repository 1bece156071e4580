"""Slot/mini-slot Monte-Carlo simulator of the K-BS network under jamming.

Per slot the engine (1) draws the arrival, (2) lets the policy pick a BS
for it, (3) draws each BS's jam state, (4) runs the M mini-slots drawing
per-mini-slot departures while the BS is nonempty, and (5) adds the
admitted arrival to its BS at slot end, so it first competes for service
in the next slot.  Holding cost uses the slot-start states.  Departing
users leave FIFO, which makes per-user delay well defined.

Randomness comes from one seeded generator; the arrival, jam and service
uniforms are drawn as whole-horizon blocks up front (in that order) and
tie-break draws are taken from the same generator during the slot loop.
The resulting departure law is identical to drawing mini-slot by
mini-slot: a departure happens in mini-slot j iff its uniform is below
the effective rate and the BS is still nonempty.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .model import NetworkConfig
from .policies import AllBlockedError, PolicyKind, decide


@dataclass
class SimMetrics:
    avg_cost: float
    avg_delay: float          # mini-slots, over completed users; 0.0 if none
    jfi: float                # reported as 1.0 when no user completed
    dropped: int
    admitted: int
    completed: int
    jfi_defined: bool
    final_states: np.ndarray
    cost_series: np.ndarray | None = None
    state_series: np.ndarray | None = None
    delays: np.ndarray = field(default_factory=lambda: np.array([]))


def jfi(delays: np.ndarray) -> float:
    """Jain's fairness index (sum d)^2 / (Q * sum d^2) of a delay sample."""
    delays = np.asarray(delays, dtype=float)
    if delays.size == 0:
        raise ValueError("JFI of an empty delay sample is undefined")
    return float(delays.sum() ** 2 / (delays.size * (delays ** 2).sum()))


def departures_in_slot(x: int, success: np.ndarray) -> tuple[int, np.ndarray]:
    """Departure count and 1-based mini-slot positions from state x, given the
    per-mini-slot success mask of this (slot, BS)."""
    if x == 0:
        return 0, np.empty(0, dtype=int)
    pos = np.flatnonzero(success)[:x]
    return len(pos), pos + 1


def run(config: NetworkConfig, kind: PolicyKind,
        collect_series: bool = True) -> SimMetrics:
    """Simulate `config.horizon` slots under the given association policy."""
    k, m, horizon = config.k, config.m, config.horizon
    rng = np.random.default_rng(config.seed)
    arrival_u = rng.random(horizon)
    jam_u = rng.random((horizon, k))
    svc_u = rng.random((horizon, k, m))

    q_vec = np.array([bs.q for bs in config.bs])
    r_vec = np.array([bs.r for bs in config.bs])
    rp_vec = np.array([bs.r_prime for bs in config.bs])
    c_vec = np.array([bs.c for bs in config.bs])

    states = np.zeros(k, dtype=int)
    queues = [deque() for _ in range(k)]   # FIFO of arrival slots
    delays: list[int] = []
    cost_series = np.empty(horizon)
    state_series = np.empty((horizon, k), dtype=np.int32) if collect_series else None
    dropped = 0
    admitted = 0

    for n in range(horizon):
        cost_series[n] = c_vec @ states
        if state_series is not None:
            state_series[n] = states

        choice = None
        if arrival_u[n] < config.p:
            try:
                choice = decide(kind, states, config, rng)
            except AllBlockedError:
                dropped += 1

        jammed = jam_u[n] < q_vec
        r_eff = np.where(jammed, r_vec, rp_vec)
        for i in range(k):
            if states[i] == 0:
                continue
            d, pos = departures_in_slot(states[i], svc_u[n, i] < r_eff[i])
            for j in range(d):
                arr = queues[i].popleft()
                delays.append(n * m + int(pos[j]) - (arr + 1) * m)
            states[i] -= d

        if choice is not None:
            states[choice] += 1
            queues[choice].append(n)
            admitted += 1

    delays_arr = np.array(delays, dtype=float)
    completed = len(delays)
    avg_cost = float(cost_series[horizon - config.measure_window:].mean())
    return SimMetrics(
        avg_cost=avg_cost,
        avg_delay=float(delays_arr.mean()) if completed else 0.0,
        jfi=jfi(delays_arr) if completed else 1.0,
        dropped=dropped,
        admitted=admitted,
        completed=completed,
        jfi_defined=completed > 0,
        final_states=states.copy(),
        cost_series=cost_series if collect_series else None,
        state_series=state_series,
        delays=delays_arr,
    )


def write_trace_csv(metrics: SimMetrics, path: str) -> None:
    """Per-slot trace CSV with columns slot, cost, state_0..state_{K-1}."""
    if metrics.state_series is None or metrics.cost_series is None:
        raise ValueError("run() was called without collect_series")
    k = metrics.state_series.shape[1]
    with open(path, "w", newline="") as fh:
        fh.write("slot,cost," + ",".join(f"state_{i}" for i in range(k)) + "\n")
        for n in range(len(metrics.cost_series)):
            row = ",".join(str(int(s)) for s in metrics.state_series[n])
            fh.write(f"{n},{metrics.cost_series[n]!r},{row}\n")
