"""Model parameters, disorder sampling, single-excitation Hamiltonian.

Basis convention for the Hamiltonian matrix: rows 0..N-1 are the emitter
excitations |i,0>, row N is the one-photon state |G,1>.  Energy zero sits
midway between emitter and cavity frequencies, so on resonance (delta = 0)
both vanish and dark-state energies live in [-W/2, W/2].
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lattice import LatticeSpec, neighbor_pairs


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters; energies in units of J when J > 0, else of W."""

    n_sites: int
    W: float
    J: float
    g_c: float
    delta: float = 0.0

    def __post_init__(self):
        if self.n_sites < 2:
            raise ValueError("need at least two emitters")
        if self.W < 0 or self.J < 0 or self.g_c < 0:
            raise ValueError("W, J, g_c must be nonnegative")

    @property
    def g(self) -> float:
        """Per-emitter coupling; the collective g_c = g*sqrt(N) is what is stored."""
        return self.g_c / np.sqrt(self.n_sites)

    @property
    def omega_e(self) -> float:
        return 0.5 * self.delta

    @property
    def omega_c(self) -> float:
        return -0.5 * self.delta


@dataclass(frozen=True)
class DisorderRealization:
    w: np.ndarray
    seed: int
    index: int

    def __post_init__(self):
        object.__setattr__(self, "w", np.asarray(self.w, dtype=np.float64))


def sample_disorder(params: ModelParams, seed: int, index: int = 0) -> DisorderRealization:
    """Uniform on-site energies in [-W/2, W/2] from a counter-based stream.

    The stream is derived from (seed, index) alone, so realization `index`
    is identical whether ensembles are generated sequentially or in
    parallel, and regardless of how many other realizations were drawn.
    """
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(index,))
    rng = np.random.default_rng(ss)
    w = rng.uniform(-0.5 * params.W, 0.5 * params.W, size=params.n_sites)
    return DisorderRealization(w=w, seed=seed, index=index)


def build_hamiltonian(
    lattice: LatticeSpec, params: ModelParams, disorder: DisorderRealization
) -> np.ndarray:
    """Dense (N+1)x(N+1) real symmetric single-excitation Hamiltonian."""
    n = params.n_sites
    if lattice.n_sites != n:
        raise ValueError(f"lattice has {lattice.n_sites} sites, params say {n}")
    if disorder.w.shape != (n,):
        raise ValueError(f"disorder length {disorder.w.shape} does not match N={n}")
    H = np.zeros((n + 1, n + 1))
    H[np.arange(n), np.arange(n)] = params.omega_e + disorder.w
    if params.J != 0.0:
        pairs = neighbor_pairs(lattice)
        H[pairs[:, 0], pairs[:, 1]] = -params.J
        H[pairs[:, 1], pairs[:, 0]] = -params.J
    H[:n, n] = params.g
    H[n, :n] = params.g
    H[n, n] = params.omega_c
    return H
