"""Command line: ``plot <kind> --in <csv> [--out <file>] [--offset ...]``.

Reads one result CSV, renders one SVG figure.  Exit status 0 on
success, 1 on any plotkit error (message on stderr), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .errors import PlotkitError
from .model import KINDS, PlotSpec
from .render import render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plot", description="Render deterministic SVG figures from "
        "result CSVs.")
    parser.add_argument("--version", action="version",
                        version=f"plot {__version__}")
    parser.add_argument("kind", choices=KINDS, help="figure kind")
    parser.add_argument("--in", dest="csv_path", required=True, metavar="CSV",
                        help="input CSV file")
    parser.add_argument("--out", dest="out_path", default=None, metavar="FILE",
                        help="output SVG path (default: next to the input)")
    parser.add_argument("--offset", nargs="+", default=(), metavar="VALUE",
                        help="per-series display offsets; rendering only, "
                        "the data layer is never shifted")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    spec = PlotSpec(kind=args.kind, csv_path=args.csv_path,
                    out_path=args.out_path, offsets=tuple(args.offset))
    try:
        out = render(spec)
    except PlotkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
