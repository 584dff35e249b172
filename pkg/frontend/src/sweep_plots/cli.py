"""Command line entry point: ``sweep-plots render``."""

from __future__ import annotations

import argparse
import sys

from .csvio import CsvFormatError
from .figures import plot_spec
from .render import render

__all__ = ["main"]


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sweep-plots",
        description=(
            "Render sweep CSVs from the singular-sense toolkit into "
            "log-log figures with reference slope guides."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p_render = sub.add_parser(
        "render", help="draw one figure from a directory of sweep CSVs"
    )
    p_render.add_argument("--figure", required=True, metavar="ID")
    p_render.add_argument(
        "--in",
        dest="in_dir",
        required=True,
        metavar="DIR",
        help="directory holding the emitted CSVs",
    )
    p_render.add_argument(
        "--out",
        dest="out_dir",
        required=True,
        metavar="DIR",
        help="directory for the SVG and PNG outputs",
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        spec = plot_spec(args.figure, args.in_dir, args.out_dir)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        written = render(spec)
    except CsvFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    for path in written:
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
