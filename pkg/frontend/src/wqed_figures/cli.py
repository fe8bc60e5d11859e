"""Command-line entry point.

    wqed-plots <figure-id|all> --data DIR --out DIR

Renders publication-style SVG analogues from wqed CSV outputs, refusing any
table whose metadata does not match the figure's declared source.
"""
from __future__ import annotations

import argparse
import sys

from .data import MetadataError
from .figures import FIGURES, render


def main(argv=None):
    parser = argparse.ArgumentParser(prog="wqed-plots")
    parser.add_argument("figure", choices=sorted(FIGURES) + ["all"],
                        help="figure id to render, or 'all'")
    parser.add_argument("--data", required=True,
                        help="directory holding the wqed CSV outputs")
    parser.add_argument("--out", required=True,
                        help="directory for the rendered SVG files")
    args = parser.parse_args(argv)
    ids = sorted(FIGURES) if args.figure == "all" else [args.figure]
    failed = False
    for figure_id in ids:
        try:
            path = render(figure_id, args.data, args.out)
        except MetadataError as err:
            print(f"wqed-plots: {figure_id}: {err}", file=sys.stderr)
            failed = True
        else:
            print(path)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
