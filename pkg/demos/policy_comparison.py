"""Compare the six association policies on the K=5 reference network.

Runs a shortened horizon over a handful of seeds and prints the mean
average cost, delay, and fairness per policy. The full-length experiment
is one CLI call:

    whittle-ua compare --config <fig2 preset> --seeds 1,2,3,4,5 --out metrics.csv
"""

from dataclasses import replace

import numpy as np

from whittle_ua import POLICY_NAMES, PolicyKind, build_table, run
from whittle_ua.presets import load_preset

config, _ = load_preset("fig2")
config = replace(config, horizon=5000, measure_window=2500)
seeds = range(1, 6)

table = build_table(config, stride=4)
print(f"{'policy':12s} {'avg cost':>10s} {'delay':>10s} {'jfi':>7s}   (delay in mini-slots)")
for name in POLICY_NAMES:
    kind = PolicyKind(name, table=table if name == "whittle" else None)
    results = [run(replace(config, seed=s), kind, collect_series=False)
               for s in seeds]
    cost = np.mean([r.avg_cost for r in results])
    delay = np.mean([r.avg_delay for r in results])
    jfi = np.mean([r.jfi for r in results])
    print(f"{name:12s} {cost:10.2f} {delay:10.2f} {jfi:7.3f}")
