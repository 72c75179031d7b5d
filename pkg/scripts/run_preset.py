#!/usr/bin/env python3
"""Thin wrapper so presets can be launched from a fresh checkout without
installing the console script:

    python3 scripts/run_preset.py run --preset fig2a --scale desk --out out/fig2a

Arguments are forwarded to the package CLI untouched; `run --help` lists
the preset names and overrides.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from semiloc.cli import main

if __name__ == "__main__":
    raise SystemExit(main())
