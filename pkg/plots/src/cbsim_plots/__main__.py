"""Render one figure from a results CSV.

Usage: cbsim-plots --figure fig3 --csv results.csv [--out figure.png]
"""

import argparse
import sys

from .figures import RECIPES, RecipeError, render_figure


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="cbsim-plots",
        description="Render a named figure from a cbsim results CSV",
    )
    parser.add_argument("--figure", required=True, choices=sorted(RECIPES),
                        help="figure id")
    parser.add_argument("--csv", required=True, help="results CSV from cbsim run")
    parser.add_argument("--out", help="image path, .png or .svg "
                                      "(default: CSV name with .png)")
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    out = args.out or args.csv.rsplit(".", 1)[0] + ".png"
    try:
        summary = render_figure(args.figure, args.csv, out)
    except RecipeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"rendered {summary.figure_id} with {summary.num_curves} curves "
          f"to {summary.out_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
