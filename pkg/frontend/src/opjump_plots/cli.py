"""render_fig: turn opjump CSV tables into multi-panel SVG figures.

Exit codes: 0 success, 1 bad input (unreadable file, unrecognized table,
missing column, nothing to plot), 2 usage error (argparse).
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .figspec import fig1_spec, fig2_spec
from .render import render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="render_fig",
        description=(
            "Render CSV output of the opjump CLI as a multi-panel SVG. "
            "fig1 mode takes taylor tables (one panel each) plus at most "
            "one asymptote curve table, overlaid on the first panel; "
            "fig2 mode takes scan tables and makes one panel per "
            "polynomial degree."
        ),
    )
    parser.add_argument("--mode", required=True, choices=("fig1", "fig2"))
    parser.add_argument(
        "--csv", required=True, nargs="+", metavar="PATH",
        help="input CSV files, as written by the opjump subcommands "
             "taylor / asymptote (fig1) or scan (fig2)",
    )
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--xlabel", default=None)
    parser.add_argument("--ylabel", default=None)
    parser.add_argument(
        "--subsample", type=int, default=1, metavar="K",
        help="plot every K-th row of each series; a readability aid only, "
             "not faithful to any published pruning of this data "
             "(default: 1, plot everything)",
    )
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    build = fig1_spec if args.mode == "fig1" else fig2_spec
    label_kw = {}
    if args.xlabel is not None:
        label_kw["xlabel"] = args.xlabel
    if args.ylabel is not None:
        label_kw["ylabel"] = args.ylabel
    try:
        spec = build(args.csv, args.out, **label_kw)
        result = render(spec, subsample=args.subsample)
    except (ValueError, OSError) as exc:
        print(f"render_fig: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {result.out_path} ({len(result.series)} series)")
    return 0


def entry():
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
