"""Shared helpers for the test suite."""

import numpy as np
import pytest

from whittle_ua import BsParams


def random_stable_params(rng, m, p, min_margin=0.05):
    """Draw BsParams whose average service rate exceeds p by min_margin.

    Rejection sampling over (q, r, r') keeps the draw simple and makes the
    induced single-BS chain positive recurrent, which every solver test
    assumes.
    """
    for _ in range(10_000):
        q = rng.uniform(0.05, 0.95)
        r = rng.uniform(0.0, 0.6)
        rp = rng.uniform(r + 0.05, 1.0)
        c = rng.uniform(0.5, 50.0)
        params = BsParams(q=q, r=r, r_prime=rp, c=c)
        if params.service_rate(m) - p >= min_margin:
            return params
    raise RuntimeError("could not draw stable parameters")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
