"""CLI: render one figure from a sweep CSV.

    littlewood-plot --kind {rotation_profile,convergence,histogram} \
        --csv sweep.csv --out figure.svg [--title TEXT]

Exit codes: 0 on success, 1 when the CSV cannot back the figure.
"""

from __future__ import annotations

import argparse
import sys

from .figures import FIGURE_KINDS, FigureError, FigureSpec, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="littlewood-plot",
        description="figures from littlewood sweep CSVs (schema v1)",
    )
    parser.add_argument("--kind", choices=FIGURE_KINDS, required=True)
    parser.add_argument("--csv", required=True, help="input CSV (schema v1)")
    parser.add_argument("--out", required=True, help="output image (defaults to SVG)")
    parser.add_argument("--title", default="", help="figure title override")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = FigureSpec(
            csv_path=args.csv, figure_kind=args.kind,
            output_path=args.out, title=args.title,
        )
        out = render(spec)
    except (FigureError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
