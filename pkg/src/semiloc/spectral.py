"""Eigensolvers for the single-excitation Hamiltonian.

Two paths: a dense symmetric solver for general J, and an O(N^2) structured
solver for J = 0, where the matrix is an arrowhead (diagonal emitter block
plus one coupling row).  The structured solver finds one secular root per
interlacing interval with a safeguarded Newton iteration run in coordinates
shifted to the nearest diagonal entry, then rebuilds the coupling weights
from the computed roots so the eigenvector matrix stays orthogonal to
machine precision even when roots hug their poles.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from numba import njit

from .model import DisorderRealization, ModelParams

# cluster tolerance for repeated diagonal entries, relative to W
_DEFLATION_REL = 1e-12
# outer-bracket padding in units of g_c; any factor > 1 keeps the sign bounds
_EDGE_MARGIN = 1.0001
# emitter weight below which a state counts as pure photon
_NORM_FLOOR = 1e-14


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigensystem with energies ascending; column alpha of `vectors` is the
    eigenvector of energies[alpha] in the basis (emitter sites 0..N-1, photon)."""

    energies: np.ndarray
    vectors: np.ndarray

    @property
    def n_emitters(self) -> int:
        return self.energies.shape[0] - 1

    @cached_property
    def photon_weights(self) -> np.ndarray:
        return self.vectors[-1] ** 2

    @cached_property
    def emitter_norms(self) -> np.ndarray:
        return 1.0 - self.photon_weights

    @cached_property
    def amplitudes(self) -> np.ndarray:
        """a[alpha, j]: emitter part of state alpha, renormalized to unit weight.

        Pure-photon states (possible only at g = 0) get a zero row.
        """
        norms = self.emitter_norms
        safe = np.where(norms > _NORM_FLOOR, norms, 1.0)
        a = self.vectors[:-1].T / np.sqrt(safe)[:, None]
        a[norms <= _NORM_FLOOR] = 0.0
        return a


def diagonalize_dense(H: np.ndarray) -> SpectralDecomposition:
    """Full symmetric eigensolve; works for any J."""
    H = np.asarray(H, dtype=np.float64)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {H.shape}")
    try:
        energies, vectors = np.linalg.eigh(H)
    except np.linalg.LinAlgError as err:
        raise RuntimeError(
            f"dense eigensolver failed on {H.shape[0]}x{H.shape[0]} matrix "
            f"(max|H|={np.abs(H).max():.3g}, finite={bool(np.isfinite(H).all())}): {err}"
        ) from err
    return SpectralDecomposition(energies=energies, vectors=vectors)


@njit(cache=True, fastmath=True)
def _secular_roots(d, rho, omega_c, lo_edge, hi_edge):
    """Roots of f(lam) = lam - omega_c - sum_j rho_j/(lam - d_j).

    d strictly ascending, all rho_j > 0, so the roots strictly interlace d
    with one root below d[0] (bracketed by lo_edge) and one above d[-1]
    (bracketed by hi_edge).  Returns (anchors, deltas) with
    root_k = d[anchors[k]] + deltas[k]; keeping the offset separate preserves
    relative accuracy when a root sits very close to its pole.
    """
    n = d.shape[0]
    anchors = np.empty(n + 1, dtype=np.int64)
    deltas = np.empty(n + 1)
    for k in range(n + 1):
        if k == 0:
            a = 0
            lo = lo_edge - d[0]
            hi = 0.0
        elif k == n:
            a = n - 1
            lo = 0.0
            hi = hi_edge - d[n - 1]
        else:
            # sign of f at the interval midpoint picks the nearer pole
            mid = 0.5 * (d[k - 1] + d[k])
            f = mid - omega_c
            for j in range(n):
                f -= rho[j] / (mid - d[j])
            if f > 0.0:
                a = k - 1
                lo = 0.0
                hi = mid - d[a]
            else:
                a = k
                lo = mid - d[a]
                hi = 0.0
        da = d[a]
        x = 0.5 * (lo + hi)
        if 0 < k < n:
            # first guess from the two-pole model c - ra/y - rb/(y-gap) = 0
            # with the far poles frozen at their midpoint value; same trick
            # as LAPACK's dlaed4, cuts the Newton count roughly in half
            ra = rho[k - 1]
            rb = rho[k]
            gap = d[k] - d[k - 1]
            c = f + ra / (mid - d[k - 1]) + rb / (mid - d[k])
            b2 = c * gap + ra + rb
            sq = np.sqrt(max(b2 * b2 - 4.0 * c * ra * gap, 0.0))
            q = 0.5 * (b2 + sq) if b2 >= 0.0 else 0.5 * (b2 - sq)
            y = -1.0
            if q != 0.0:
                y = ra * gap / q
            if not (0.0 < y < gap) and c != 0.0:
                y = q / c
            x0 = y if a == k - 1 else y - gap
            if lo < x0 < hi:
                x = x0
        for _ in range(300):
            f = (da - omega_c) + x
            fp = 1.0
            for j in range(n):
                inv = 1.0 / ((da - d[j]) + x)
                r = rho[j] * inv
                f -= r
                fp += r * inv
            if f > 0.0:  # f is strictly increasing between poles
                hi = x
            else:
                lo = x
            xn = x - f / fp
            if not (lo < xn < hi):
                xn = 0.5 * (lo + hi)
            if xn == x:
                break
            done = abs(xn - x) <= 1e-15 * abs(xn)
            x = xn
            if done:
                break
        anchors[k] = a
        deltas[k] = x
    return anchors, deltas


@njit(cache=True, fastmath=True)
def _weights_and_norms(d, anchors, deltas, gaps, nrm2):
    """Rebuilt coupling weights and squared eigenvector norms.

    Fills gaps[j, k] = root_k - d_j from the shifted root representation and
    accumulates nrm2[k] = 1 + sum_j rho_hat_j / gaps[j, k]^2.  rho_hat_j is
    the residue at d_j of the rational function whose roots are the computed
    root set: rho_hat_j = (d_j - root_j)(root_n - d_j) prod_{k!=j, k<n}
    (root_k - d_j)/(d_k - d_j).  Every factor is positive by interlacing, and
    pairing each root with its neighbouring pole keeps the running product
    within a factor ~n of 1, so nothing overflows.
    """
    n = d.shape[0]
    danchor = np.empty(n + 1)
    for k in range(n + 1):
        danchor[k] = d[anchors[k]]
    rho_hat = np.empty(n)
    for k in range(n + 1):
        nrm2[k] = 1.0
    for j in range(n):
        dj = d[j]
        row = gaps[j]
        for k in range(n + 1):
            row[k] = (danchor[k] - dj) + deltas[k]
        p = 1.0
        for k in range(j):
            p *= row[k] / (d[k] - dj)
        for k in range(j + 1, n):
            p *= row[k] / (d[k] - dj)
        rj = (-row[j]) * row[n] * p
        rho_hat[j] = rj
        for k in range(n + 1):
            t = row[k]
            nrm2[k] += rj / (t * t)
    return rho_hat


@njit(cache=True, fastmath=True)
def _fill_vectors(gaps, rho_hat, nrm2, order, out):
    """Normalized eigenvectors; rows follow the original site order, columns
    follow ascending roots.  Row writes are contiguous."""
    n = gaps.shape[0]
    scale = 1.0 / np.sqrt(nrm2)
    for j in range(n):
        zj = np.sqrt(rho_hat[j])
        row_g = gaps[j]
        row_o = out[order[j]]
        for k in range(n + 1):
            row_o[k] = zj * scale[k] / row_g[k]
    row_o = out[n]
    for k in range(n + 1):
        row_o[k] = scale[k]


def _edge_brackets(d, omega_c, g_c):
    lo = min(d[0], omega_c) - _EDGE_MARGIN * g_c
    hi = max(d[-1], omega_c) + _EDGE_MARGIN * g_c
    return lo, hi


def _deflated_arrowhead(d_sorted, order, starts, stops, g2, omega_c, g_c):
    # repeated diagonal entries: the uniform combination within each cluster
    # carries all the coupling (weight m*g^2); the remaining m-1 directions
    # decouple and stay at the cluster energy.
    n = d_sorted.shape[0]
    reps = np.array([d_sorted[a:b].mean() for a, b in zip(starts, stops)])
    sizes = (stops - starts).astype(np.float64)
    rho = sizes * g2
    lo, hi = _edge_brackets(reps, omega_c, g_c)
    anchors, deltas = _secular_roots(reps, rho, omega_c, lo, hi)
    n_g = reps.shape[0]
    gaps = np.empty((n_g, n_g + 1))
    nrm2 = np.empty(n_g + 1)
    rho_hat = _weights_and_norms(reps, anchors, deltas, gaps, nrm2)
    scale = 1.0 / np.sqrt(nrm2)
    comp = (np.sqrt(rho_hat)[:, None] / gaps) * scale[None, :]
    site_comp = comp / np.sqrt(sizes)[:, None]

    vec_sorted = np.zeros((n + 1, n + 1))
    energies = np.empty(n + 1)
    col = 0
    for r in range(n_g + 1):
        energies[col] = reps[anchors[r]] + deltas[r]
        for kg in range(n_g):
            vec_sorted[starts[kg] : stops[kg], col] = site_comp[kg, r]
        vec_sorted[n, col] = scale[r]
        col += 1
        if r < n_g:
            a, b = int(starts[r]), int(stops[r])
            for t in range(1, b - a):
                s = 1.0 / np.sqrt(t * (t + 1.0))
                vec_sorted[a : a + t, col] = s
                vec_sorted[a + t, col] = -t * s
                energies[col] = reps[r]
                col += 1
    out = np.empty((n + 1, n + 1))
    out[order] = vec_sorted[:n]
    out[n] = vec_sorted[n]
    return SpectralDecomposition(energies=energies, vectors=out)


def diagonalize_arrowhead(
    disorder: DisorderRealization, params: ModelParams
) -> SpectralDecomposition:
    """Structured O(N^2) eigensolve, valid only at J = 0."""
    if params.J != 0:
        raise ValueError("structured solver requires J = 0")
    n = params.n_sites
    if disorder.w.shape != (n,):
        raise ValueError(f"disorder length {disorder.w.shape[0]} does not match N={n}")
    d_full = params.omega_e + disorder.w
    omega_c = params.omega_c

    if params.g_c == 0:
        energies = np.concatenate([d_full, [omega_c]])
        perm = np.argsort(energies, kind="stable")
        vectors = np.zeros((n + 1, n + 1))
        vectors[perm, np.arange(n + 1)] = 1.0
        return SpectralDecomposition(energies=energies[perm], vectors=vectors)

    order = np.argsort(d_full, kind="stable")
    d_sorted = d_full[order]
    tol = _DEFLATION_REL * params.W
    split = np.flatnonzero(np.diff(d_sorted) > tol) + 1
    if split.shape[0] != n - 1:
        starts = np.concatenate([[0], split])
        stops = np.concatenate([split, [n]])
        return _deflated_arrowhead(
            d_sorted, order, starts, stops, params.g ** 2, omega_c, params.g_c
        )

    rho = np.full(n, params.g ** 2)
    lo, hi = _edge_brackets(d_sorted, omega_c, params.g_c)
    anchors, deltas = _secular_roots(d_sorted, rho, omega_c, lo, hi)
    gaps = np.empty((n, n + 1))
    nrm2 = np.empty(n + 1)
    rho_hat = _weights_and_norms(d_sorted, anchors, deltas, gaps, nrm2)
    out = np.empty((n + 1, n + 1))
    _fill_vectors(gaps, rho_hat, nrm2, order, out)
    energies = d_sorted[anchors] + deltas
    return SpectralDecomposition(energies=energies, vectors=out)


def dark_state_indices(decomp: SpectralDecomposition, params: ModelParams) -> np.ndarray:
    """State indices with the two polaritons removed.

    Polaritons are the two states of largest photon weight; at g_c = 0 photon
    weight cannot rank states, so the extremal-energy pair is dropped instead.
    Pure-photon states (g = 0 only) are excluded as well.
    """
    alive = np.flatnonzero(decomp.emitter_norms > _NORM_FLOOR)
    if params.g_c == 0:
        ranked = alive[np.argsort(decomp.energies[alive], kind="stable")]
        return np.sort(ranked[1:-1])
    ranked = alive[np.argsort(decomp.photon_weights[alive], kind="stable")]
    return np.sort(ranked[:-2])
