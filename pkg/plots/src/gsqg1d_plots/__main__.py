"""Render the nine standard figure layouts from a completed run directory.

    python -m gsqg1d_plots --run-dir RUNS --out figures/

The run directory layout is documented in gsqg1d_plots.figures; it is
produced by the solver CLI (one subdirectory per command).  Rendering
consumes only files.
"""

import argparse
import sys

from .figures import render_all


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="gsqg1d-plots", description=__doc__)
    ap.add_argument("--run-dir", required=True, dest="run_dir")
    ap.add_argument("--out", default="figures")
    ap.add_argument("--format", default="png", choices=["png", "pdf", "svg"])
    args = ap.parse_args(argv)
    try:
        written = render_all(args.run_dir, args.out, fmt=args.format)
    except (FileNotFoundError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
