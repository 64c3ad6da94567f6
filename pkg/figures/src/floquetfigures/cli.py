"""Command line entry point: render figures from a run manifest."""

import argparse
import logging
import sys

from .io import SchemaError
from .render import render_all


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="floquetfigures",
        description="Render figures from floquetwaves experiment outputs.")
    sub = parser.add_subparsers(dest="command", required=True)
    r = sub.add_parser("render", help="render the full gallery")
    r.add_argument("--manifest", required=True,
                   help="manifest.json written by the experiment runner")
    r.add_argument("--out", required=True, help="output directory")
    args = parser.parse_args(argv)

    logging.basicConfig(level=logging.INFO, format="%(message)s")
    try:
        result = render_all(args.manifest, args.out)
    except (OSError, SchemaError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"rendered {len(result['images'])} image(s) -> {result['index']}")
    if result["missing"]:
        print("missing experiments: " + ", ".join(sorted(result["missing"])))
    return 0


if __name__ == "__main__":
    sys.exit(main())
