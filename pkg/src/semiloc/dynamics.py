"""Closed-system dynamics of a single excitation launched from one site.

Everything here is evaluated in the eigenbasis of a precomputed
decomposition, so there is no time-stepping error: the propagator is applied
as amp(t) = V (c * e^{-i E t}) with c the overlaps of the initial site state.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .lattice import LatticeSpec, squared_displacements_from
from .spectral import SpectralDecomposition


@dataclass(frozen=True)
class EvolutionResult:
    """Site-resolved probabilities along a time grid.

    site_probabilities has shape (n_times, n_sites); the photon component is
    kept separate so the rows sum to 1 only together with it.
    """

    times: np.ndarray
    origin: int
    site_probabilities: np.ndarray
    photon_probability: np.ndarray
    msd: np.ndarray | None = None
    qt: np.ndarray | None = None


def _propagated_probabilities(vectors, energies, coeffs, times):
    # two real matmuls instead of one complex one; vectors stays float64
    phase = np.outer(times, energies)
    re = (np.cos(phase) * coeffs) @ vectors.T
    im = (np.sin(phase) * coeffs) @ vectors.T
    return re * re + im * im


def evolve(
    decomp: SpectralDecomposition,
    origin: int,
    times: np.ndarray,
    lattice: LatticeSpec | None = None,
) -> EvolutionResult:
    """Exact unitary evolution of |origin, 0> on the given time grid.

    Passing the lattice also fills the mean squared displacement field.
    """
    n_sites = decomp.vectors.shape[0] - 1
    if not 0 <= origin < n_sites:
        raise ValueError(f"origin {origin} outside 0..{n_sites - 1}")
    times = np.asarray(times, dtype=np.float64)
    coeffs = decomp.vectors[origin]
    probs = _propagated_probabilities(decomp.vectors, decomp.energies, coeffs, times)
    result = EvolutionResult(
        times=times,
        origin=origin,
        site_probabilities=probs[:, :n_sites],
        photon_probability=probs[:, n_sites],
    )
    if lattice is not None:
        result = replace(result, msd=msd(result, lattice))
    return result


def msd(result: EvolutionResult, lattice: LatticeSpec) -> np.ndarray:
    """Second moment of the site distribution about the origin site."""
    sq = squared_displacements_from(lattice, result.origin)
    return result.site_probabilities @ sq


def escape_qt(decomps, times: np.ndarray):
    """Realization-averaged probability that the excitation changed site.

    Counting transfers between distinct emitter sites only, the return
    probabilities telescope into diagonal propagator elements:

        Q(t) = (1/N) [N - 1 + |U_pp|^2 - sum_a |U_aa|^2]

    with U_pp the photon->photon element. Returns (exact, approximation)
    where the approximation (1/N) sum_a (1 - P_aa) drops the photon term;
    their difference is (1 - |U_pp|^2)/N, nonnegative and bounded by 1/N.
    """
    times = np.asarray(times, dtype=np.float64)
    exact = np.zeros_like(times)
    approx = np.zeros_like(times)
    count = 0
    for decomp in decomps:
        n_sites = decomp.vectors.shape[0] - 1
        weights = decomp.vectors * decomp.vectors  # (basis, state)
        phase = np.outer(times, decomp.energies)
        diag_re = np.cos(phase) @ weights.T
        diag_im = np.sin(phase) @ weights.T
        diag2 = diag_re * diag_re + diag_im * diag_im  # |U_aa|^2, all a
        site_sum = np.sum(diag2[:, :n_sites], axis=1)
        exact += (n_sites - 1.0 + diag2[:, n_sites] - site_sum) / n_sites
        approx += (n_sites - site_sum) / n_sites
        count += 1
    if count == 0:
        raise ValueError("empty ensemble")
    return exact / count, approx / count


def time_averaged_probability(
    decomp: SpectralDecomposition, origin: int, horizon: float
) -> np.ndarray:
    """Average of P_origin,target(t) over t in [0, horizon], every target.

    Closed form: sum_ab m_a m_b sinc((E_a - E_b) T) with m_a = V_ia V_ja.
    O(n_states^2) per target, intended for validation runs; the horizon ->
    infinity limit is the infinite-time kernel from `localization`.
    """
    if horizon <= 0:
        raise ValueError("horizon must be positive")
    energies = decomp.energies
    vectors = decomp.vectors
    arg = (energies[:, None] - energies[None, :]) * horizon
    kernel = np.sinc(arg / np.pi)  # np.sinc carries a factor pi
    m = vectors * vectors[origin]  # (target, state)
    return np.sum((m @ kernel) * m, axis=1)
