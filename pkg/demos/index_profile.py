"""Walk through the per-BS index computation on the K=5 reference network.

Builds the index table for the fig2 preset, prints the index profile of
each BS at a few states, and shows the resulting admission preferences at
an example load vector.
"""

import numpy as np

from whittle_ua import PolicyKind, build_table, decide
from whittle_ua.presets import load_preset

config, _ = load_preset("fig2")
print(f"network: K={config.k}, M={config.m}, p={config.p}, n_max={config.n_max}")

table = build_table(config, stride=4)
probe_states = [0, 5, 10, 20, 40]
print("\nindex profile (state -> index):")
for i in range(config.k):
    row = ", ".join(f"{x}:{table.per_bs[i, x]:8.2f}" for x in probe_states)
    print(f"  bs {i} (C={config.bs[i].c:5.1f}): {row}")

# the arriving user goes to the BS with the least index at its current load
states = np.array([3, 1, 4, 2, 0])
rng = np.random.default_rng(0)
choice = decide(PolicyKind("whittle", table=table), states, config, rng)
at_state = [table.per_bs[i, states[i]] for i in range(config.k)]
print(f"\nload vector {states.tolist()}")
print("indices at load:", ", ".join(f"{v:.2f}" for v in at_state))
print(f"arrival admitted at bs {choice}")
