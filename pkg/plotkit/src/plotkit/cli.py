"""Script entry point: plotkit --in metrics.csv --metric avg_cost --out fig.png"""

from __future__ import annotations

import argparse
import sys

from .figures import METRICS, FigureSpec, PlotError, render


def build_parser():
    parser = argparse.ArgumentParser(
        prog="plotkit",
        description="render whittle-ua metrics CSVs as per-policy line charts")
    parser.add_argument("--in", dest="csv_path", required=True,
                        help="metrics CSV from the compare or sweep command")
    parser.add_argument("--metric", choices=METRICS, required=True)
    parser.add_argument("--x", dest="x_field", default=None,
                        choices=("sweep_value", "seed"),
                        help="x-axis column (default: sweep_value when "
                             "present, else seed)")
    parser.add_argument("--out", dest="out_path", required=True,
                        help="output image (format from extension)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        render(FigureSpec(csv_path=args.csv_path, metric=args.metric,
                          out_path=args.out_path, x_field=args.x_field))
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PlotError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {args.out_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
