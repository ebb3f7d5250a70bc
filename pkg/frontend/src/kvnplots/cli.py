"""kvnplot: render solver output files to PNG images.

Usage:
    kvnplot --kind heatmap --in out/density_t0.0.csv --out density.png
    kvnplot --kind convergence --in out/n16/report.json out/n32/report.json --out conv.png

Exit codes: 0 on success, 2 on schema mismatch or unreadable inputs.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .readers import SchemaError
from .render import KINDS, PlotJob, render


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kvnplot", description=__doc__)
    parser.add_argument("--kind", required=True, choices=KINDS)
    parser.add_argument("--in", dest="inputs", nargs="+", required=True,
                        metavar="PATH", help="solver output file(s)")
    parser.add_argument("--out", required=True, help="output image path (PNG)")
    parser.add_argument("--cmap", default="viridis", help="matplotlib colormap name")
    parser.add_argument("--figsize", default="7,5.5", help="figure size W,H in inches")
    parser.add_argument("--dpi", type=int, default=130)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = make_parser().parse_args(argv)
    try:
        width, height = (float(x) for x in args.figsize.split(","))
        job = PlotJob(
            kind=args.kind,
            inputs=tuple(args.inputs),
            output=args.out,
            colormap=args.cmap,
            figsize=(width, height),
            dpi=args.dpi,
        )
        summary = render(job)
    except (SchemaError, FileNotFoundError, ValueError) as err:
        print(f"kvnplot: {err}", file=sys.stderr)
        return 2
    print(summary.output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
