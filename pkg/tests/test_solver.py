"""Average-cost solver: value iteration, threshold evaluation, f(lam, t)."""

import numpy as np
import pytest

from whittle_ua import (BsParams, advantage_h, average_cost_f,
                        evaluate_threshold, greedy_policy, rvi_solve,
                        stationary_distribution, transition_kernels)
from whittle_ua.solver import SolverError

from conftest import random_stable_params


class TestRviSolve:
    def test_zero_cost_zero_tax(self):
        params = BsParams(q=0.3, r=0.2, r_prime=0.6, c=0.0)
        sol = rvi_solve(params, 2, 0.4, 0.0, 10)
        assert sol.eta == pytest.approx(0.0, abs=1e-9)
        np.testing.assert_allclose(sol.v, 0.0, atol=1e-8)

    def test_huge_tax_accepts_everywhere(self):
        params = BsParams(q=0.3, r=0.2, r_prime=0.6, c=2.0)
        n_max = 10
        lam = 1e9 * params.c * n_max
        sol = rvi_solve(params, 2, 0.4, lam, n_max)
        pol = greedy_policy(sol, transition_kernels(params, 2, 0.4, n_max))
        assert pol.t == n_max

    def test_eta_matches_best_threshold(self):
        # brute-force oracle: evaluate every threshold policy exactly
        params = BsParams(q=0.4, r=0.1, r_prime=0.5, c=1.0)
        m, p, lam, n_max = 2, 0.3, 5.0, 12
        sol = rvi_solve(params, m, p, lam, n_max)
        best = min(evaluate_threshold(params, m, p, lam, t, n_max)[1]
                   for t in range(-1, n_max + 1))
        assert sol.eta == pytest.approx(best, abs=1e-8)

    def test_residual_below_tolerance(self, rng):
        params = random_stable_params(rng, 2, 0.3)
        sol = rvi_solve(params, 2, 0.3, 3.0, 15)
        assert sol.residual <= 1e-9
        assert sol.v[0] == 0.0


class TestGreedyPolicy:
    def test_zero_cost_positive_tax(self):
        params = BsParams(q=0.3, r=0.2, r_prime=0.6, c=0.0)
        sol = rvi_solve(params, 1, 0.4, 2.0, 8)
        pol = greedy_policy(sol, transition_kernels(params, 1, 0.4, 8))
        assert pol.t == 8

    def test_zero_cost_negative_tax(self):
        params = BsParams(q=0.3, r=0.2, r_prime=0.6, c=0.0)
        sol = rvi_solve(params, 1, 0.4, -2.0, 8)
        pol = greedy_policy(sol, transition_kernels(params, 1, 0.4, 8))
        assert pol.t == -1

    def test_zero_tax_rejects(self):
        # with free rejection and positive holding cost, never admit
        params = BsParams(q=0.2, r=0.16, r_prime=0.45, c=32.0)
        sol = rvi_solve(params, 20, 0.6, 0.0, 15)
        pol = greedy_policy(sol, transition_kernels(params, 20, 0.6, 15))
        assert pol.t == -1


class TestEvaluateThreshold:
    def test_always_accept_zero_cost(self):
        params = BsParams(q=0.3, r=0.2, r_prime=0.6, c=0.0)
        v, eta = evaluate_threshold(params, 1, 0.4, 7.0, 10, 10)
        assert eta == pytest.approx(0.0, abs=1e-10)
        np.testing.assert_allclose(v, 0.0, atol=1e-9)

    def test_always_reject_zero_cost(self):
        params = BsParams(q=0.3, r=0.2, r_prime=0.6, c=0.0)
        _, eta = evaluate_threshold(params, 1, 0.4, 7.0, -1, 10)
        assert eta == pytest.approx(7.0, abs=1e-10)

    def test_threshold_out_of_range(self):
        params = BsParams(q=0.3, r=0.2, r_prime=0.6, c=1.0)
        with pytest.raises(ValueError):
            evaluate_threshold(params, 1, 0.4, 0.0, 11, 10)

    def test_eta_matches_stationary_formula(self, rng):
        # the linear solve and the occupancy-weighted cost agree
        for _ in range(10):
            params = random_stable_params(rng, 2, 0.3)
            t = int(rng.integers(-1, 11))
            lam = rng.uniform(0.0, 10.0)
            _, eta = evaluate_threshold(params, 2, 0.3, lam, t, 10)
            f = average_cost_f(params, 2, 0.3, lam, t, 10)
            assert eta == pytest.approx(f, abs=1e-8)


class TestStationaryDistribution:
    def test_birth_death_closed_form(self):
        # m=1 accept-always is a birth-death chain with a geometric tail
        params = BsParams(q=0.3, r=0.2, r_prime=0.6, c=1.0)
        nu = stationary_distribution(params, 1, 0.3, 40, 40)
        assert nu[0] == pytest.approx(0.3750, abs=1e-6)
        assert nu[1] == pytest.approx(0.334821, abs=1e-6)
        ratios = nu[2:10] / nu[1:9]
        np.testing.assert_allclose(ratios, 0.464286, atol=1e-6)

    def test_reject_everything_absorbs_at_zero(self):
        params = BsParams(q=0.3, r=0.2, r_prime=0.6, c=1.0)
        nu = stationary_distribution(params, 1, 0.3, -1, 10)
        assert nu[0] == pytest.approx(1.0, abs=1e-10)

    def test_normalized(self, rng):
        for _ in range(5):
            params = random_stable_params(rng, 3, 0.4)
            t = int(rng.integers(-1, 16))
            nu = stationary_distribution(params, 3, 0.4, t, 15)
            assert nu.sum() == pytest.approx(1.0, abs=1e-10)
            assert nu.min() >= 0.0


class TestAverageCostF:
    def test_no_tax_when_always_accepting(self, rng):
        params = random_stable_params(rng, 2, 0.3)
        n_max = 10
        nu = stationary_distribution(params, 2, 0.3, n_max, n_max)
        expect = params.c * np.arange(n_max + 1) @ nu
        got = average_cost_f(params, 2, 0.3, 123.0, n_max, n_max)
        assert got == pytest.approx(expect, abs=1e-10)

    def test_zero_cost_always_reject_pays_tax(self):
        params = BsParams(q=0.3, r=0.2, r_prime=0.6, c=0.0)
        assert average_cost_f(params, 1, 0.3, 4.2, -1, 10) == \
            pytest.approx(4.2, abs=1e-10)

    def test_discrete_submodular_on_grid(self, rng):
        # f(l1,t2) + f(l2,t1) >= f(l1,t1) + f(l2,t2) for l2 < l1, t2 < t1
        params = random_stable_params(rng, 2, 0.3)
        n_max = 12
        lams = np.sort(rng.uniform(0.0, 5.0 * params.c, 5))
        ts = sorted(rng.choice(np.arange(-1, n_max + 1), 5, replace=False))
        f = np.array([[average_cost_f(params, 2, 0.3, lam, t, n_max)
                       for t in ts] for lam in lams])
        for a in range(5):
            for b in range(a + 1, 5):
                for u in range(5):
                    for w in range(u + 1, 5):
                        lhs = f[b, u] + f[a, w]
                        rhs = f[b, w] + f[a, u]
                        assert lhs >= rhs - 1e-9


class TestAdvantageH:
    def test_empty_state_formula(self, rng):
        params = random_stable_params(rng, 2, 0.3)
        sol = rvi_solve(params, 2, 0.3, 3.0, 12)
        h0 = advantage_h(sol, params, 2, 0.3, 0)
        assert h0 == pytest.approx(0.3 * (sol.v[1] - sol.v[0]), abs=1e-12)
        assert h0 >= 0.0

    def test_monotone_in_state(self, rng):
        params = random_stable_params(rng, 2, 0.3)
        sol = rvi_solve(params, 2, 0.3, 3.0, 12)
        hs = [advantage_h(sol, params, 2, 0.3, x) for x in range(10)]
        assert all(b >= a - 1e-9 for a, b in zip(hs, hs[1:]))

    def test_zero_when_value_flat(self):
        params = BsParams(q=0.3, r=0.2, r_prime=0.6, c=0.0)
        sol = rvi_solve(params, 2, 0.3, 0.0, 10)
        for x in range(11):
            assert advantage_h(sol, params, 2, 0.3, x) == \
                pytest.approx(0.0, abs=1e-8)
