"""Dark-state level-spacing statistics and deviations from bare-level midpoints."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .localization import renormalize_energy
from .model import DisorderRealization, ModelParams
from .spectral import SpectralDecomposition, dark_state_indices

KINDS = ("wigner_dyson", "poisson", "semi_poisson")


@dataclass(frozen=True)
class SpacingSample:
    """Unit-mean unfolded spacings pooled over realizations."""

    spacings: np.ndarray
    window: Tuple[float, float]
    n_realizations: int


def harvest_spacings(decomps, params: ModelParams, window=(0.0, 1.0)) -> SpacingSample:
    """Pool adjacent dark-state spacings from a renormalized-energy window.

    Each realization's spacings are divided by that realization-window's
    mean spacing (local unfolding) before pooling, so the sample mean is 1
    regardless of how level density varies across the window or ensemble.
    Realizations with fewer than two states in the window contribute nothing.
    """
    lo, hi = window
    pool = []
    used = 0
    for decomp in decomps:
        dark = dark_state_indices(decomp, params)
        eps = renormalize_energy(decomp.energies[dark], params.W)
        eps = eps[(eps >= lo) & (eps < hi)]
        if eps.shape[0] < 2:
            continue
        s = np.diff(eps)
        mean = s.mean()
        if mean <= 0:
            continue
        pool.append(s / mean)
        used += 1
    if not pool:
        raise ValueError(f"no realization had two dark states in window {window}")
    return SpacingSample(
        spacings=np.concatenate(pool), window=(float(lo), float(hi)), n_realizations=used
    )


def reference_pdf(kind: str, s):
    """Closed-form unit-mean spacing densities."""
    s = np.asarray(s, dtype=np.float64)
    if np.any(s < 0):
        raise ValueError("spacings are nonnegative")
    if kind == "wigner_dyson":
        return 0.5 * np.pi * s * np.exp(-0.25 * np.pi * s**2)
    if kind == "poisson":
        return np.exp(-s)
    if kind == "semi_poisson":
        return 4.0 * s * np.exp(-2.0 * s)
    raise ValueError(f"unknown reference {kind!r}, expected one of {KINDS}")


def reference_cdf(kind: str, s):
    s = np.asarray(s, dtype=np.float64)
    if np.any(s < 0):
        raise ValueError("spacings are nonnegative")
    if kind == "wigner_dyson":
        return 1.0 - np.exp(-0.25 * np.pi * s**2)
    if kind == "poisson":
        return 1.0 - np.exp(-s)
    if kind == "semi_poisson":
        return 1.0 - (1.0 + 2.0 * s) * np.exp(-2.0 * s)
    raise ValueError(f"unknown reference {kind!r}, expected one of {KINDS}")


def distribution_distance(sample: SpacingSample, kind: str) -> float:
    """Kolmogorov-Smirnov statistic against one of the reference laws."""
    s = np.sort(sample.spacings)
    n = s.shape[0]
    if n == 0:
        raise ValueError("empty spacing sample")
    F = reference_cdf(kind, s)
    grid = np.arange(n, dtype=np.float64)
    return float(max(np.max(F - grid / n), np.max((grid + 1.0) / n - F)))


def best_reference(sample: SpacingSample) -> str:
    """Name of the reference law with the smallest KS distance."""
    return min(KINDS, key=lambda k: distribution_distance(sample, k))


def spacing_histogram(sample: SpacingSample, bins: int = 40, top: float = 4.0):
    """Density-normalized histogram on [0, top]; returns (centers, density)."""
    density, edges = np.histogram(sample.spacings, bins=bins, range=(0.0, top), density=True)
    return 0.5 * (edges[:-1] + edges[1:]), density


def dark_state_deviation(
    decomp: SpectralDecomposition, disorder: DisorderRealization, params: ModelParams
):
    """Scaled offset of each dark level from the midpoint of the two bare
    levels bracketing it: Delta = N*(E - (w_i + w_{i+1})/2).

    States outside the bare-energy range have no bracketing pair and are
    excluded.  Returns (kept dark indices, deltas).
    """
    dark = dark_state_indices(decomp, params)
    bare = np.sort(params.omega_e + disorder.w)
    E = decomp.energies[dark]
    pos = np.searchsorted(bare, E, side="right")
    inside = (pos > 0) & (pos < bare.shape[0])
    pos = pos[inside]
    mid = 0.5 * (bare[pos - 1] + bare[pos])
    deltas = params.n_sites * (E[inside] - mid)
    return dark[inside], deltas
