"""Command line wrapper: smx-figures <kind> --csv <file> --out <image>."""

from __future__ import annotations

import argparse
import sys

from .errors import FigureError
from .render import KINDS, FigureSpec, render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="smx-figures")
    parser.add_argument("kind", choices=KINDS)
    parser.add_argument("--csv", required=True, action="append",
                        help="input CSV from the smx CLI (repeatable)")
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--xlim", type=float, nargs=2, default=None)
    parser.add_argument("--ylim", type=float, nargs=2, default=None)
    parser.add_argument("--title", default="")
    args = parser.parse_args(argv)
    spec = FigureSpec(
        kind=args.kind, inputs=tuple(args.csv), output=args.out,
        xlim=tuple(args.xlim) if args.xlim else None,
        ylim=tuple(args.ylim) if args.ylim else None,
        title=args.title,
    )
    try:
        render(spec)
    except (FigureError, OSError) as exc:
        print(f"smx-figures: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
