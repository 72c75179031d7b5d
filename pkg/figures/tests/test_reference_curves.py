"""The overlay formulas are normalized unit-mean densities."""

from __future__ import annotations

import numpy as np

from figkit.overlays import REFERENCE_PDFS, power_guide


def test_reference_pdfs_are_normalized_with_unit_mean():
    s = np.linspace(0.0, 60.0, 600001)
    for name, pdf in REFERENCE_PDFS.items():
        p = pdf(s)
        assert abs(np.trapezoid(p, s) - 1.0) < 1e-6, name
        assert abs(np.trapezoid(s * p, s) - 1.0) < 1e-6, name


def test_power_guide_passes_through_anchor_with_given_slope():
    x = np.array([10.0, 100.0])
    y = power_guide(x, 10.0, 0.5, -2.0)
    assert y[0] == 0.5
    assert abs(np.log(y[1] / y[0]) / np.log(x[1] / x[0]) + 2.0) < 1e-12
