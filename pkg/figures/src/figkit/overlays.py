"""Closed-form reference curves.

Everything drawn on top of the data comes from the expressions below;
nothing in this package fits anything.
"""

from __future__ import annotations

import numpy as np

# band-center mobility edge of the 3D box-disorder Anderson model, in
# units of the hopping
CRITICAL_DISORDER = 16.5


def wigner_dyson(s):
    return 0.5 * np.pi * s * np.exp(-0.25 * np.pi * s * s)


def poisson(s):
    return np.exp(-np.asarray(s, dtype=float))


def semi_poisson(s):
    return 4.0 * s * np.exp(-2.0 * s)


# insertion order doubles as plotting order
REFERENCE_PDFS = {
    "wigner_dyson": wigner_dyson,
    "semi_poisson": semi_poisson,
    "poisson": poisson,
}

REFERENCE_DASHES = {
    "wigner_dyson": "--",
    "semi_poisson": "-.",
    "poisson": ":",
}


def power_guide(x, anchor_x: float, anchor_y: float, power: float) -> np.ndarray:
    """Guide line through (anchor_x, anchor_y) with the given power."""
    x = np.asarray(x, dtype=float)
    return anchor_y * (x / anchor_x) ** power
