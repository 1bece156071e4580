"""Average-cost solver for the decoupled single-BS admission MDP.

Under a tax lam charged whenever an arrival is rejected, the per-BS MDP has
per-slot cost C*x (+ lam on reject) and the accept/reject kernels of
model.transition_kernels.  The dynamic programming equation

    V(x) + eta = min( C*x + sum_j p_acc(j|x) V(j),
                      C*x + lam + sum_j p_rej(j|x) V(j) ),   V(0) = 0,

is solved by span-seminorm relative value iteration.  The module also
provides exact policy evaluation for fixed-threshold policies, stationary
distributions, and the threshold-policy average-cost surface f(lam, t).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import BsParams, departure_pmf, transition_kernels


class SolverError(RuntimeError):
    pass


class ConvergenceError(SolverError):
    def __init__(self, msg, residual=None):
        super().__init__(msg)
        self.residual = residual


class StructureViolation(SolverError):
    """Greedy accept set of a converged solution is not a down-set."""


@dataclass
class ValueSolution:
    """Relative value function with V[0] = 0, average cost and tax."""

    v: np.ndarray
    eta: float
    lam: float
    residual: float
    n_iter: int


@dataclass(frozen=True)
class ThresholdPolicy:
    """Accept an arrival iff the current state is <= t; t = -1 rejects everywhere."""

    t: int


def _costs(params: BsParams, lam: float, n_max: int) -> tuple[np.ndarray, np.ndarray]:
    states = np.arange(n_max + 1, dtype=float)
    cost_acc = params.c * states
    cost_rej = params.c * states + lam
    return cost_acc, cost_rej


def rvi_solve(params: BsParams, m: int, p: float, lam: float, n_max: int,
              tol: float = 1e-9, max_iter: int = 10**6) -> ValueSolution:
    """Relative value iteration for the tax-lam MDP, reference state 0.

    Iterates on kernels damped with a 0.5 self-loop (aperiodicity
    transform; leaves eta and the greedy policy unchanged, halves V) and
    stops once the sup-norm residual of the original DPE is below tol.
    """
    if tol <= 0.0:
        raise ValueError(f"tol must be positive, got {tol}")
    p_acc, p_rej = transition_kernels(params, m, p, n_max)
    cost_acc, cost_rej = _costs(params, lam, n_max)

    def bellman(mat_acc, mat_rej, v):
        return np.minimum(cost_acc + mat_acc @ v, cost_rej + mat_rej @ v)

    d_acc = 0.5 * (np.eye(n_max + 1) + p_acc)
    d_rej = 0.5 * (np.eye(n_max + 1) + p_rej)

    v = np.zeros(n_max + 1)
    eta = 0.0
    residual = np.inf
    span_goal = tol
    it = 0
    while it < max_iter:
        it += 1
        w = bellman(d_acc, d_rej, v)
        diff = w - v
        span = diff.max() - diff.min()
        v = w - w[0]
        if span < span_goal:
            eta = 0.5 * (diff.max() + diff.min())
            # check against the untransformed DPE; V = v/2 undoes the damping
            v_orig = 0.5 * v
            residual = np.abs(bellman(p_acc, p_rej, v_orig) - v_orig - eta).max()
            if residual <= tol:
                return ValueSolution(v=v_orig, eta=eta, lam=lam,
                                     residual=residual, n_iter=it)
            span_goal *= 0.1
    raise ConvergenceError(
        f"relative value iteration did not converge in {max_iter} iterations "
        f"(residual {residual:.3e})", residual=residual)


def greedy_policy(sol: ValueSolution, kernels: tuple[np.ndarray, np.ndarray],
                  tie_tol: float = 1e-9) -> ThresholdPolicy:
    """Extract the per-state argmin action and verify it is a threshold rule.

    Ties within tie_tol resolve to accept.  Raises StructureViolation if
    the accept set is not of the form {0..t}.  The top two states are
    exempt from the structure check: accept transitions out of them are
    redirected by truncation, which deflates V(n_max) and makes accepting
    spuriously cheap there, so their actions carry no information about
    the untruncated policy.
    """
    p_acc, p_rej = kernels
    accept_cont = p_acc @ sol.v
    reject_cont = sol.lam + p_rej @ sol.v
    accept = accept_cont <= reject_cont + tie_tol
    n = len(accept)
    exempt = min(2, n - 1)
    core = accept[: n - exempt]
    n_accept = int(core.sum())
    if not core[:n_accept].all():
        raise StructureViolation(
            f"greedy accept set is not a down-set: {np.flatnonzero(accept)}")
    t = n_accept - 1
    if t == len(core) - 1:
        # the accepted prefix reaches the exempt zone; extend while contiguous
        for x in range(len(core), n):
            if not accept[x]:
                break
            t = x
    return ThresholdPolicy(t=t)


def _policy_matrices(params: BsParams, m: int, p: float, t: int,
                     n_max: int) -> np.ndarray:
    """One-slot kernel of the threshold-t policy (accept iff x <= t)."""
    p_acc, p_rej = transition_kernels(params, m, p, n_max)
    mat = p_rej.copy()
    if t >= 0:
        mat[: t + 1] = p_acc[: t + 1]
    return mat


def threshold_system(params: BsParams, m: int, p: float, t: int,
                     n_max: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Linear system for exact evaluation of the threshold-t policy.

    Unknowns are z = (V(0..n_max), eta).  State q contributes the equation
    V(q) - sum_j P(j|q) V(j) + eta = C*q (+ lam for q > t, split into the
    returned tax-indicator column), and the last row pins V(0) = 0.
    Returns (A, b0, b1) with right-hand side b0 + lam * b1.
    """
    n = n_max + 1
    mat = _policy_matrices(params, m, p, t, n_max)
    a = np.zeros((n + 1, n + 1))
    a[:n, :n] = np.eye(n) - mat
    a[:n, n] = 1.0
    a[n, 0] = 1.0
    b0 = np.zeros(n + 1)
    b0[:n] = params.c * np.arange(n)
    b1 = np.zeros(n + 1)
    b1[t + 1: n] = 1.0
    return a, b0, b1


def evaluate_threshold(params: BsParams, m: int, p: float, lam: float, t: int,
                       n_max: int) -> tuple[np.ndarray, float]:
    """Exact (V, eta) of the threshold-t policy under tax lam, V(0) = 0."""
    if not -1 <= t <= n_max:
        raise ValueError(f"threshold must be in [-1, {n_max}], got {t}")
    a, b0, b1 = threshold_system(params, m, p, t, n_max)
    try:
        z = np.linalg.solve(a, b0 + lam * b1)
    except np.linalg.LinAlgError as exc:
        raise SolverError(f"singular policy-evaluation system for t={t}") from exc
    return z[:-1], float(z[-1])


def stationary_distribution(params: BsParams, m: int, p: float, t: int,
                            n_max: int) -> np.ndarray:
    """Stationary distribution of the chain induced by the threshold-t policy."""
    if not -1 <= t <= n_max:
        raise ValueError(f"threshold must be in [-1, {n_max}], got {t}")
    mat = _policy_matrices(params, m, p, t, n_max)
    n = n_max + 1
    a = mat.T - np.eye(n)
    a[-1] = 1.0  # replace one balance equation with normalization
    b = np.zeros(n)
    b[-1] = 1.0
    try:
        nu = np.linalg.solve(a, b)
    except np.linalg.LinAlgError as exc:
        raise SolverError(f"singular stationary system for t={t}") from exc
    if nu.min() < -1e-9:
        raise SolverError(f"stationary solve produced negative mass {nu.min():.3e}")
    nu = np.clip(nu, 0.0, None)
    return nu / nu.sum()


def average_cost_f(params: BsParams, m: int, p: float, lam: float, t: int,
                   n_max: int) -> float:
    """f(lam, t) = C * E_nu[X] + lam * P_nu(X > t) for the threshold-t chain."""
    nu = stationary_distribution(params, m, p, t, n_max)
    states = np.arange(n_max + 1)
    return float(params.c * states @ nu + lam * nu[t + 1:].sum())


def advantage_h(sol: ValueSolution, params: BsParams, m: int, p: float,
                x: int) -> float:
    """Admission advantage h(x) = E[V(x - D + arr)] - E[V(x - D)].

    Diagnostic quantity from the threshold-optimality argument; the
    optimal policy accepts at x iff h(x) <= lam, and h is non-decreasing.
    """
    n_max = len(sol.v) - 1
    if not 0 <= x <= n_max:
        raise ValueError(f"state must be in [0, {n_max}], got {x}")
    pmf = departure_pmf(x, params, m)
    h = 0.0
    for d, pd in enumerate(pmf):
        h += pd * p * (sol.v[min(x - d + 1, n_max)] - sol.v[x - d])
    return h
