"""Command-line front end.

Subcommands: stability | index | simulate | compare | sweep.  Exit codes:
0 success, 1 domain failure (instability, non-convergence), 2 usage or
config error (including sweep values that produce invalid parameters).  All CSV output is UTF-8 with
LF line endings and header-named columns.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import replace

import numpy as np

from .model import NetworkConfig, stability_margin
from .policies import POLICY_NAMES, PolicyKind
from .presets import ConfigError, load_config, sweep_configs
from .sim import run, write_trace_csv
from .whittle import (IndexComputationError, IndexIterConfig, WhittleTable,
                      build_table, write_table_csv)

METRIC_COLUMNS = ["policy", "seed", "sweep_param", "sweep_value",
                  "avg_cost", "avg_delay_minislots", "jfi", "dropped"]


def _parse_seeds(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad seed list {text!r}") from exc


def _policy_kinds(names: list[str], config: NetworkConfig,
                  stride: int) -> list[PolicyKind]:
    kinds = []
    for name in names:
        table = build_table(config, stride=stride) if name == "whittle" else None
        kinds.append(PolicyKind(name, table=table))
    return kinds


def _metric_rows(config: NetworkConfig, names: list[str], seeds: list[int],
                 stride: int, sweep_param: str = "", sweep_value="") -> list[list]:
    rows = []
    for kind in _policy_kinds(names, config, stride):
        for seed in seeds:
            metrics = run(replace(config, seed=seed), kind, collect_series=False)
            rows.append([kind.name, seed, sweep_param, sweep_value,
                         repr(metrics.avg_cost), repr(metrics.avg_delay),
                         repr(metrics.jfi), metrics.dropped])
    return rows


def _write_csv(path: str, header: list[str], rows: list[list]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def cmd_stability(args) -> int:
    config, _ = load_config(args.config)
    for i, bs in enumerate(config.bs):
        print(f"bs {i}: margin {bs.service_rate(config.m) - config.p:.6g} users/slot")
    margin = stability_margin(config)
    print(f"overall: margin {margin:.6g} users/slot "
          f"({'stable' if margin > 0 else 'NOT stable'})")
    return 0 if margin > 0 else 1


def cmd_index(args) -> int:
    config, _ = load_config(args.config)
    table = build_table(config, stride=args.stride)
    for i in range(config.k):
        mono = bool(np.all(np.diff(table.per_bs[i]) >= -1e-9))
        print(f"bs {i}: index range [{table.per_bs[i][0]:.6g}, "
              f"{table.per_bs[i][-1]:.6g}], monotone={mono}")
    write_table_csv(table, args.out)
    print(f"wrote {args.out}")
    return 0


def cmd_simulate(args) -> int:
    config, _ = load_config(args.config)
    if args.seed is not None:
        config = replace(config, seed=args.seed)
    table = build_table(config, stride=args.stride) if args.policy == "whittle" else None
    metrics = run(config, PolicyKind(args.policy, table=table))
    print(f"policy={args.policy} seed={config.seed} avg_cost={metrics.avg_cost:.6g} "
          f"avg_delay_minislots={metrics.avg_delay:.6g} jfi={metrics.jfi:.6g} "
          f"dropped={metrics.dropped}")
    if args.out:
        write_trace_csv(metrics, args.out)
        print(f"wrote {args.out}")
    return 0


def cmd_compare(args) -> int:
    config, _ = load_config(args.config)
    names = args.policies.split(",") if args.policies else list(POLICY_NAMES)
    rows = _metric_rows(config, names, _parse_seeds(args.seeds), args.stride)
    _write_csv(args.out, METRIC_COLUMNS, rows)
    print(f"wrote {args.out} ({len(rows)} rows)")
    return 0


def cmd_sweep(args) -> int:
    config, sweep = load_config(args.config)
    if sweep is None:
        raise ConfigError(f"{args.config} has no sweep block")
    names = args.policies.split(",") if args.policies else list(POLICY_NAMES)
    seeds = _parse_seeds(args.seeds)
    rows = []
    for value, cfg in sweep_configs(config, sweep):
        rows.extend(_metric_rows(cfg, names, seeds, args.stride,
                                 sweep_param=sweep["param"], sweep_value=value))
    _write_csv(args.out, METRIC_COLUMNS, rows)
    print(f"wrote {args.out} ({len(rows)} rows)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="whittle-ua",
        description="Whittle-index user association toolkit for jamming-prone networks")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, **kwargs):
        sp = sub.add_parser(name, **kwargs)
        sp.set_defaults(func=func)
        sp.add_argument("--config", required=True, help="config file (JSON, # comments allowed)")
        return sp

    add("stability", cmd_stability,
        help="print per-BS stability margins; exit 1 if unstable")

    sp = add("index", cmd_index, help="build and export the Whittle index table")
    sp.add_argument("--stride", type=int, default=1)
    sp.add_argument("--out", required=True)

    sp = add("simulate", cmd_simulate, help="run one policy once")
    sp.add_argument("--policy", choices=POLICY_NAMES, required=True)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--stride", type=int, default=1)
    sp.add_argument("--out", default=None, help="per-slot trace CSV")

    for name, func, hlp in (("compare", cmd_compare,
                             "run policies x seeds, one metrics row each"),
                            ("sweep", cmd_sweep,
                             "run the config's sweep, long-format metrics CSV")):
        sp = add(name, func, help=hlp)
        sp.add_argument("--seeds", required=True, help="comma-separated seed list")
        sp.add_argument("--policies", default=None,
                        help="comma-separated subset of " + "|".join(POLICY_NAMES))
        sp.add_argument("--stride", type=int, default=1)
        sp.add_argument("--out", required=True)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (IndexComputationError, ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
