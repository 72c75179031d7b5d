#!/usr/bin/env python3
"""Mean deviation of dark levels from bare midpoints against disorder,
one curve per energy window."""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from figkit.runner import script_main  # noqa: E402

if __name__ == "__main__":
    sys.exit(script_main(
        "fig3b",
        patterns=("fig3b/fig3b.csv",),
        xscale="log",
        yscale="log",
    ))
