#!/usr/bin/env python3
"""Participation-ratio map over disorder and renormalized energy for the
uncoupled rows of the sweep."""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from figkit.runner import script_main  # noqa: E402

if __name__ == "__main__":
    sys.exit(script_main(
        "fig2b",
        patterns=("fig2bc/fig2bc.csv",),
        xscale="log",
    ))
