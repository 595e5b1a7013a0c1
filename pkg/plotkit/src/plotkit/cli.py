"""Console entry point: plot --csv <path> --out <path> [--title <str>]."""

from __future__ import annotations

import argparse
import sys

from .figure import render_response_figure


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="plot",
        description="Render a three-panel response figure from a response_curve.csv",
    )
    parser.add_argument("--csv", required=True, help="input response_curve.csv")
    parser.add_argument("--out", required=True, help="output SVG path")
    parser.add_argument("--title", default=None, help="optional figure title")
    args = parser.parse_args(argv)
    try:
        info = render_response_figure(args.csv, args.out, title=args.title)
    except (FileNotFoundError, ValueError) as exc:
        print(f"plot: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {info['out_path']} (chi peak at beta={info['peak_beta']:g})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
