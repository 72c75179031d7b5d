#!/usr/bin/env python3
"""Mean return probability against disorder, one curve per coupling,
with the 3D mobility edge marked."""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from figkit.runner import script_main  # noqa: E402

if __name__ == "__main__":
    sys.exit(script_main(
        "fig2a",
        patterns=("fig2a/fig2a.csv",),
        overlays=("critical_disorder",),
    ))
