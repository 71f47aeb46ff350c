"""Command line for the figure renderer.

Usage::

    steerclone-plot --curves sym.csv:solid f2.csv:solid f3.csv:solid \
        dashed.csv:dashed dotted.csv:dotted --region region.csv --out fig1.png
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .render import HeaderError, PlotJob, render


def parse_curve_arg(text: str) -> tuple[str, str]:
    path, sep, style = text.rpartition(":")
    if not sep or not path:
        raise ValueError(f"curve {text!r} must look like <file.csv>:<style>")
    return path, style


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="steerclone-plot",
        description="Render steerclone CSV files into a steering-plane figure.",
    )
    parser.add_argument(
        "--curves", nargs="*", default=[], metavar="FILE:STYLE",
        help="curve inputs with style solid, dashed, dotted, or scatter",
    )
    parser.add_argument("--region", default=None, help="region-sample CSV to scatter and shade")
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--svg", action="store_true", help="write SVG instead of PNG")
    parser.add_argument("--dpi", type=int, default=200)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = args.out
    if args.svg and not out.endswith(".svg"):
        out = out.rsplit(".", 1)[0] + ".svg"
    try:
        curves = tuple(parse_curve_arg(c) for c in args.curves)
        job = PlotJob(curves=curves, region=args.region, output=out, dpi=args.dpi)
        render(job)
    except HeaderError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
