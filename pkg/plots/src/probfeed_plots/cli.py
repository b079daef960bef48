"""Batch figure rendering for probfeed CSV artifacts."""

from __future__ import annotations

import argparse
import sys

from .render import KINDS, SchemaError, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="probfeed-plot",
        description="Render probfeed experiment CSVs into static figures.",
    )
    parser.add_argument("--input", required=True, help="experiment CSV file")
    parser.add_argument("--kind", required=True, choices=KINDS)
    parser.add_argument("--output", required=True, help="image file to write (png/pdf/svg)")
    parser.add_argument("--shade-column", default="utility", help="scatter shading column")
    parser.add_argument("--algorithm", default=None, help="scatter: algorithm to plot")
    parser.add_argument("--instance-id", default=None, help="scatter: instance to plot")
    parser.add_argument("--xlabel", default=None)
    parser.add_argument("--ylabel", default=None)
    parser.add_argument("--dpi", type=int, default=100)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    options = {
        "shade_column": args.shade_column,
        "algorithm": args.algorithm,
        "instance_id": args.instance_id,
        "dpi": args.dpi,
    }
    if args.xlabel:
        options["xlabel"] = args.xlabel
    if args.ylabel:
        options["ylabel"] = args.ylabel
    try:
        path = render(args.input, args.kind, args.output, options)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
