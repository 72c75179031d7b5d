#!/usr/bin/env python3
"""Binned participation ratio against system size for each regime, with a
1/N guide anchored on the weakest-disorder curve."""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from figkit.runner import script_main  # noqa: E402

if __name__ == "__main__":
    sys.exit(script_main(
        "fig2d",
        patterns=("fig2d/fig2d.csv",),
        xscale="log",
        yscale="log",
        overlays=("inverse_n",),
    ))
