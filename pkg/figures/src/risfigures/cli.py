"""CLI: render one of the four standard figures from a sweep CSV."""

from __future__ import annotations

import argparse
import sys

from .plots import SchemaError, figure_spec, plot_figure


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plot", description="Plot sweep results, one line per scheme"
    )
    parser.add_argument("--csv", required=True, help="sweep results CSV")
    parser.add_argument(
        "--figure", type=int, required=True, choices=(2, 3, 4, 5),
        help="2: sum rate vs N, 3: EE vs N, 4: sum rate vs PA power, 5: EE vs PA power",
    )
    parser.add_argument("--out", required=True, help="output PNG path")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    spec = figure_spec(args.figure, args.csv, args.out)
    try:
        groups = plot_figure(spec)
    except FileNotFoundError:
        print(f"error: CSV not found: {args.csv}", file=sys.stderr)
        return 1
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote figure {args.figure} with {len(groups)} scheme lines to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
