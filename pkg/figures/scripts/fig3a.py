#!/usr/bin/env python3
"""Unfolded level-spacing histograms with the three reference
distributions, plus a log-scale inset for the tails."""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from figkit.runner import script_main  # noqa: E402

if __name__ == "__main__":
    sys.exit(script_main(
        "fig3a",
        patterns=("fig3a/fig3a.csv",),
        overlays=("wigner_dyson", "semi_poisson", "poisson"),
    ))
