#!/usr/bin/env python3
"""Disorder-averaged spread of an initially localized excitation over
time, with and without the cavity."""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from figkit.runner import script_main  # noqa: E402

if __name__ == "__main__":
    sys.exit(script_main(
        "fig4b",
        patterns=("fig4b/fig4b.csv",),
    ))
