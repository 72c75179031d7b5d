#!/usr/bin/env python3
"""Time-averaged drained current against chain length, coupled and
uncoupled, with 1/N and 1/N^2 guides."""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from figkit.runner import script_main  # noqa: E402

if __name__ == "__main__":
    sys.exit(script_main(
        "fig4a",
        patterns=("fig4a/fig4a.csv", "fig4a/fig4a_control.csv"),
        xscale="log",
        yscale="log",
        overlays=("power_guides",),
    ))
