"""Localization diagnostics: IPR, infinite-time probabilities, energy
renormalization, disorder-averaged profiles."""
from __future__ import annotations

import numpy as np

from .lattice import LatticeSpec, distances_from
from .spectral import _NORM_FLOOR, SpectralDecomposition

# eigenvalues closer than this (relative to the spectral span) form a
# degenerate block in the infinite-time average
_DEGENERACY_REL = 1e-10
# amplitudes below this are excluded from logarithmic averages
_LOG_FLOOR = 1e-300
_BIN_WIDTH = 0.02


def ipr(decomp: SpectralDecomposition, alpha: int) -> float:
    """Fourth-moment sum of the normalized emitter amplitudes of one state."""
    if decomp.emitter_norms[alpha] <= _NORM_FLOOR:
        raise ValueError(f"state {alpha} is a pure photon state, IPR undefined")
    a = decomp.amplitudes[alpha]
    return float(np.sum(a**4))


def ipr_all(decomp: SpectralDecomposition) -> np.ndarray:
    """IPR of every state; NaN for pure photon states."""
    vals = np.sum(decomp.amplitudes**4, axis=1)
    vals[decomp.emitter_norms <= _NORM_FLOOR] = np.nan
    return vals


def _degenerate_block_starts(energies: np.ndarray) -> np.ndarray:
    span = energies[-1] - energies[0]
    tol = _DEGENERACY_REL * max(span, abs(energies[-1]), abs(energies[0]))
    starts = np.concatenate([[0], np.flatnonzero(np.diff(energies) > tol) + 1])
    return starts


def infinite_time_pi(decomp: SpectralDecomposition, i: int, j: int) -> float:
    """Infinite-time average of the transition probability i -> j.

    Diagonal-ensemble value Pi_ij = sum_alpha |v_i|^2 |v_j|^2 over
    eigenstates; eigenvalues within 1e-10 of the spectral span are treated
    as one degenerate block whose cross terms survive the time average.
    Raw (photon-inclusive) amplitudes, so sum_j Pi_ij <= 1.
    """
    starts = _degenerate_block_starts(decomp.energies)
    prod = decomp.vectors[i] * decomp.vectors[j]
    if starts.shape[0] == decomp.energies.shape[0]:
        return float(np.sum(prod * prod))
    return float(np.sum(np.add.reduceat(prod, starts) ** 2))


def pi_diagonal(decomp: SpectralDecomposition) -> np.ndarray:
    """Pi_ii for every emitter site at once."""
    starts = _degenerate_block_starts(decomp.energies)
    sq = decomp.vectors[:-1] ** 2
    if starts.shape[0] == decomp.energies.shape[0]:
        return np.sum(sq * sq, axis=1)
    return np.sum(np.add.reduceat(sq, starts, axis=1) ** 2, axis=1)


def renormalize_energy(E, W: float):
    """Map the dark-state band [-W/2, W/2] onto [0, 1]; reports are clamped."""
    if W <= 0:
        raise ValueError("renormalized energy needs W > 0")
    return np.clip((np.asarray(E, dtype=np.float64) + 0.5 * W) / W, 0.0, 1.0)


def energy_bin_means(eps, values, width: float = _BIN_WIDTH):
    """Per-bin means over half-open bins [k*width, (k+1)*width) anchored at 0.

    Returns (centers, means, counts); empty bins carry NaN means.  eps is
    clipped to [0, 1] and the top edge closes so eps=1 lands in the last bin.
    """
    eps = np.asarray(eps, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    n_bins = int(np.ceil(1.0 / width))
    idx = np.clip((np.clip(eps, 0.0, 1.0) / width).astype(np.int64), 0, n_bins - 1)
    sums = np.bincount(idx, weights=values, minlength=n_bins)
    counts = np.bincount(idx, minlength=n_bins)
    with np.errstate(invalid="ignore"):
        means = np.where(counts > 0, sums / np.maximum(counts, 1), np.nan)
    centers = (np.arange(n_bins) + 0.5) * width
    return centers, means, counts


def most_localized_state(decomp: SpectralDecomposition, origin: int) -> int:
    """Index of the eigenstate with the largest weight on `origin`."""
    return int(np.argmax(decomp.amplitudes[:, origin] ** 2))


def profile_from_amplitudes(amp2_rows, lattice: LatticeSpec, origin: int):
    """Geometric-mean profile versus distance from per-realization |a_j|^2 rows.

    ln|a_j|^2 is pooled over realizations and over sites at equal distance,
    then exponentiated, which exposes both the exponential core and the flat
    far tail.  Returns (distances, profile) sorted by distance.
    """
    dist = distances_from(lattice, origin)
    uniq, inverse = np.unique(dist, return_inverse=True)
    acc = np.zeros(uniq.shape[0])
    counts = np.zeros(uniq.shape[0])
    seen = False
    for a2 in amp2_rows:
        seen = True
        a2 = np.asarray(a2, dtype=np.float64)
        keep = a2 > _LOG_FLOOR
        acc += np.bincount(inverse[keep], weights=np.log(a2[keep]), minlength=uniq.shape[0])
        counts += np.bincount(inverse[keep], minlength=uniq.shape[0])
    if not seen:
        raise ValueError("empty ensemble")
    profile = np.zeros(uniq.shape[0])  # all-zero amplitudes stay zero
    ok = counts > 0
    profile[ok] = np.exp(acc[ok] / counts[ok])
    return uniq.astype(np.float64), profile


def profile_log_mean(
    decomps,
    lattice: LatticeSpec,
    origin: int,
    select=most_localized_state,
):
    """Geometric-mean eigenstate profile versus distance from `origin`.

    Each realization contributes the state chosen by `select` (default: the
    one maximally localized on the origin).
    """
    rows = (
        decomp.amplitudes[select(decomp, origin)] ** 2 for decomp in decomps
    )
    return profile_from_amplitudes(rows, lattice, origin)


def fit_localization_length(distances, profile, tail_level: float):
    """Least-squares xi from ln(profile) = c - 2 d / xi, restricted to
    distances where the profile clears 10x the expected far-tail level.

    Returns (xi, intercept); NaN xi when fewer than two points qualify.
    """
    distances = np.asarray(distances, dtype=np.float64)
    profile = np.asarray(profile, dtype=np.float64)
    ok = np.isfinite(profile) & (profile > 10.0 * tail_level) & (profile > 0)
    if ok.sum() < 2:
        return float("nan"), float("nan")
    slope, intercept = np.polyfit(distances[ok], np.log(profile[ok]), 1)
    if slope >= 0:
        return float("inf"), float(intercept)
    return -2.0 / float(slope), float(intercept)
