"""Render experiment metrics CSVs as per-policy line charts.

The input is the long-format metrics CSV written by the whittle-ua CLI
(columns policy, seed, sweep_param, sweep_value, avg_cost,
avg_delay_minislots, jfi, dropped).  Parsing is strictly header-name
based, so column order in the file does not matter.  One line is drawn
per policy (sorted by name for deterministic output): the mean over
seeds at each x value, with a min-max band across seeds.
"""

from __future__ import annotations

import csv
from collections import defaultdict
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

METRICS = ("avg_cost", "avg_delay_minislots", "jfi")


class PlotError(ValueError):
    pass


@dataclass(frozen=True)
class FigureSpec:
    csv_path: str
    metric: str
    out_path: str
    x_field: str | None = None   # sweep_value | seed; None picks automatically

    def __post_init__(self):
        if self.metric not in METRICS:
            raise PlotError(f"metric must be one of {METRICS}, got {self.metric!r}")
        if self.x_field not in (None, "sweep_value", "seed"):
            raise PlotError(f"x field must be sweep_value or seed, got {self.x_field!r}")


def read_rows(path):
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise PlotError(f"{path}: no data rows")
    return rows


def _pick_x_field(rows):
    # sweep output carries a non-empty sweep_value; plain compare output
    # leaves it blank, and the seed works as the x axis there
    if any(row.get("sweep_value") for row in rows):
        return "sweep_value"
    return "seed"


def series(rows, metric, x_field):
    """Per-policy (x, mean, min, max) arrays, policies sorted by name."""
    needed = {"policy", metric, x_field}
    missing = needed - set(rows[0])
    if missing:
        raise PlotError(f"missing columns: {sorted(missing)}")
    grouped = defaultdict(lambda: defaultdict(list))
    for row in rows:
        grouped[row["policy"]][float(row[x_field])].append(float(row[metric]))
    out = {}
    for policy in sorted(grouped):
        xs = np.array(sorted(grouped[policy]))
        vals = [np.array(grouped[policy][x]) for x in xs]
        out[policy] = (xs,
                       np.array([v.mean() for v in vals]),
                       np.array([v.min() for v in vals]),
                       np.array([v.max() for v in vals]))
    return out


AXIS_LABELS = {
    "avg_cost": "average cost per slot",
    "avg_delay_minislots": "average delay (mini-slots)",
    "jfi": "Jain's fairness index",
    "sweep_value": "swept parameter value",
    "seed": "seed",
}


def render(spec: FigureSpec):
    """Draw the figure described by spec and write it to spec.out_path.

    Returns the matplotlib Figure (useful for inspection in tests).
    """
    rows = read_rows(spec.csv_path)
    x_field = spec.x_field or _pick_x_field(rows)
    data = series(rows, spec.metric, x_field)
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for policy, (xs, mean, lo, hi) in data.items():
        line, = ax.plot(xs, mean, marker="o", markersize=3, label=policy)
        ax.fill_between(xs, lo, hi, alpha=0.15, color=line.get_color())
    ax.set_xlabel(AXIS_LABELS[x_field])
    ax.set_ylabel(AXIS_LABELS[spec.metric])
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(spec.out_path, dpi=150)
    plt.close(fig)
    return fig
