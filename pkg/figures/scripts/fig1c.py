#!/usr/bin/env python3
"""Log-averaged excitation profile per coupling strength, with the
closed-form tail level read from the analytic_tail column.

Input: out/fig1c/fig1c_gc*.csv (one table per coupling).
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from figkit.runner import script_main  # noqa: E402

if __name__ == "__main__":
    sys.exit(script_main(
        "fig1c",
        patterns=("fig1c/fig1c_gc*.csv",),
        yscale="log",
    ))
