"""rqcm-plot: render figures from rqcm output files.

Usage: rqcm-plot <kind> --in FILE [--in FILE ...] [--curve FILE] --out FIG.svg

Kinds: overlay (histogram + curve), support_band (edges table),
fraction_bars (sweep summaries), maxk_bars (sweep summary or extend log).
Exit codes: 0 success, 2 schema mismatch or usage error.
"""

from __future__ import annotations

import argparse
import sys

from .figures import KINDS, FigureSpec, render
from .parsers import SchemaError


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rqcm-plot",
                                     description="Render publication-style figures from rqcm files.")
    parser.add_argument("kind", choices=KINDS)
    parser.add_argument("--in", dest="inputs", action="append", default=[],
                        help="input file (histogram CSV, sweep JSON, or extend JSONL); repeatable")
    parser.add_argument("--curve", dest="curves", action="append", default=[],
                        help="curve or table CSV input; repeatable")
    parser.add_argument("--out", required=True, help="output image path (SVG)")
    parser.add_argument("--title", default="")
    parser.add_argument("--xlabel", default="")
    parser.add_argument("--ylabel", default="")
    return parser


def _spec_from_args(args) -> FigureSpec:
    if args.kind == "overlay":
        return FigureSpec(kind="overlay", output=args.out,
                          histograms=tuple(args.inputs), curves=tuple(args.curves),
                          title=args.title, xlabel=args.xlabel, ylabel=args.ylabel)
    if args.kind == "support_band":
        sources = tuple(args.curves) or tuple(args.inputs)
        return FigureSpec(kind="support_band", output=args.out, curves=sources,
                          title=args.title, xlabel=args.xlabel or "sigma",
                          ylabel=args.ylabel)
    if args.kind == "fraction_bars":
        return FigureSpec(kind="fraction_bars", output=args.out,
                          summaries=tuple(args.inputs), title=args.title,
                          xlabel=args.xlabel, ylabel=args.ylabel or "fraction")
    return FigureSpec(kind="maxk_bars", output=args.out, summaries=tuple(args.inputs),
                      title=args.title, xlabel=args.xlabel, ylabel=args.ylabel)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        spec = _spec_from_args(args)
        render(spec)
    except (SchemaError, ValueError, FileNotFoundError) as exc:
        print(f"rqcm-plot: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
