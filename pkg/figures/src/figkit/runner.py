"""Shared command-line entry used by the per-panel scripts."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .recipe import FigureRecipe, render
from .schema import SchemaError


def script_main(figure_id: str, patterns, xscale="linear", yscale="linear",
                overlays=(), argv=None) -> int:
    parser = argparse.ArgumentParser(
        description=f"Render panel {figure_id} from pipeline CSV output.")
    parser.add_argument("--data", default="out",
                        help="directory with one subdirectory per preset (default: out)")
    parser.add_argument("--out", default="figures/out",
                        help="directory for the rendered image (default: figures/out)")
    parser.add_argument("--fmt", choices=("png", "svg"), default="png")
    args = parser.parse_args(argv)

    data = Path(args.data)
    inputs = []
    for pattern in patterns:
        hits = sorted(data.glob(pattern))
        if not hits:
            print(f"error: no file matches {data / pattern}", file=sys.stderr)
            return 2
        inputs.extend(hits)

    recipe = FigureRecipe(figure_id=figure_id, inputs=tuple(inputs),
                          xscale=xscale, yscale=yscale, overlays=tuple(overlays))
    try:
        out = render(recipe, Path(args.out), fmt=args.fmt)
    except SchemaError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    print(f"wrote {out}")
    return 0
