from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from semiloc.lattice import chain
from semiloc.localization import (
    energy_bin_means,
    fit_localization_length,
    infinite_time_pi,
    ipr,
    ipr_all,
    most_localized_state,
    pi_diagonal,
    profile_log_mean,
    renormalize_energy,
)
from semiloc.model import ModelParams, sample_disorder
from semiloc.spectral import diagonalize_arrowhead


def test_ipr_basis_localized_state():
    # g_c=0, J=0: every emitter eigenstate sits on one site
    p = ModelParams(n_sites=8, W=10, J=0, g_c=0)
    decomp = diagonalize_arrowhead(sample_disorder(p, seed=1), p)
    alive = np.flatnonzero(decomp.emitter_norms > 0.5)
    for alpha in alive:
        assert ipr(decomp, int(alpha)) == pytest.approx(1.0)


def test_ipr_uniform_state():
    # clean polariton spreads evenly over all N sites
    n = 50
    p = ModelParams(n_sites=n, W=0, J=0, g_c=5)
    decomp = diagonalize_arrowhead(sample_disorder(p, seed=0), p)
    assert ipr(decomp, 0) == pytest.approx(1.0 / n, rel=1e-10)


def test_ipr_pure_photon_rejected():
    p = ModelParams(n_sites=5, W=10, J=0, g_c=0)
    decomp = diagonalize_arrowhead(sample_disorder(p, seed=3), p)
    photon = int(np.flatnonzero(decomp.emitter_norms <= 1e-14)[0])
    with pytest.raises(ValueError):
        ipr(decomp, photon)
    assert np.isnan(ipr_all(decomp)[photon])


@given(st.integers(3, 40), st.integers(0, 2**31))
def test_ipr_bounds(n, seed):
    p = ModelParams(n_sites=n, W=20, J=0, g_c=7)
    decomp = diagonalize_arrowhead(sample_disorder(p, seed=seed), p)
    vals = ipr_all(decomp)
    assert np.all(vals >= 1.0 / n - 1e-12)
    assert np.all(vals <= 1.0 + 1e-12)


def test_pi_trivially_localized():
    p = ModelParams(n_sites=6, W=10, J=0, g_c=0)
    decomp = diagonalize_arrowhead(sample_disorder(p, seed=4), p)
    for i in range(6):
        assert infinite_time_pi(decomp, i, i) == pytest.approx(1.0)


def test_pi_symmetry_and_diagonal_consistency():
    p = ModelParams(n_sites=40, W=25, J=0, g_c=10)
    decomp = diagonalize_arrowhead(sample_disorder(p, seed=5), p)
    assert infinite_time_pi(decomp, 3, 17) == infinite_time_pi(decomp, 17, 3)
    diag = pi_diagonal(decomp)
    for i in (0, 7, 39):
        assert diag[i] == pytest.approx(infinite_time_pi(decomp, i, i), abs=1e-14)
    assert np.all(diag >= 0) and np.all(diag <= 1)


def test_pi_return_sum_rule():
    # sum_i Pi_ii = sum_alpha IPR * emitter_norm^2
    p = ModelParams(n_sites=120, W=25, J=0, g_c=30)
    decomp = diagonalize_arrowhead(sample_disorder(p, seed=6), p)
    lhs = pi_diagonal(decomp).sum()
    rhs = np.nansum(ipr_all(decomp) * decomp.emitter_norms**2)
    assert lhs == pytest.approx(rhs, abs=1e-10)


def test_pi_degenerate_block():
    # W=0: N-1 dark states share one energy; cross terms must be kept.
    # Completeness gives Pi_ij = (delta_ij - 1/N)^2 + 2*(1/(2N))^2.
    n = 30
    p = ModelParams(n_sites=n, W=0, J=0, g_c=4)
    decomp = diagonalize_arrowhead(sample_disorder(p, seed=0), p)
    expect_off = 1.0 / n**2 + 0.5 / n**2
    expect_diag = (1.0 - 1.0 / n) ** 2 + 0.5 / n**2
    assert infinite_time_pi(decomp, 2, 9) == pytest.approx(expect_off, rel=1e-9)
    assert infinite_time_pi(decomp, 4, 4) == pytest.approx(expect_diag, rel=1e-9)
    assert pi_diagonal(decomp)[4] == pytest.approx(expect_diag, rel=1e-9)


def test_pi_row_sum_bounded():
    p = ModelParams(n_sites=25, W=25, J=0, g_c=10)
    decomp = diagonalize_arrowhead(sample_disorder(p, seed=7), p)
    row = sum(infinite_time_pi(decomp, 0, j) for j in range(25))
    assert row <= 1.0 + 1e-12


def test_renormalize_energy():
    W = 30.0
    assert renormalize_energy(-W / 2, W) == 0.0
    assert renormalize_energy(0.0, W) == 0.5
    assert renormalize_energy(W / 2, W) == 1.0
    assert renormalize_energy(W, W) == 1.0  # clamped
    assert renormalize_energy(-W, W) == 0.0
    assert np.allclose(renormalize_energy([-W / 2, W / 2], W), [0, 1])
    with pytest.raises(ValueError):
        renormalize_energy(0.0, 0.0)


def test_energy_bin_means_conventions():
    centers, means, counts = energy_bin_means([0.5], [7.0], width=0.02)
    k = np.flatnonzero(counts)[0]
    assert centers[k] == pytest.approx(0.51)  # half-open [0.50, 0.52)
    assert means[k] == 7.0
    # top edge closes: eps=1 lands in the last bin
    _, means1, counts1 = energy_bin_means([1.0], [3.0], width=0.02)
    assert counts1[-1] == 1 and means1[-1] == 3.0
    # uniform values: every nonempty bin mean equals the value
    rng = np.random.default_rng(0)
    eps = rng.uniform(0, 1, 500)
    _, means2, counts2 = energy_bin_means(eps, np.full(500, 2.5))
    assert np.allclose(means2[counts2 > 0], 2.5)
    assert np.all(np.isnan(means2[counts2 == 0]))


def test_profile_single_localized_realization():
    p = ModelParams(n_sites=9, W=10, J=0, g_c=0)
    decomp = diagonalize_arrowhead(sample_disorder(p, seed=2), p)
    lat = chain(9, "open")
    dist, prof = profile_log_mean([decomp], lat, origin=4)
    assert prof[dist == 0][0] == pytest.approx(1.0)
    assert np.all(prof[dist > 0] == 0.0)


def test_profile_requires_realizations():
    with pytest.raises(ValueError):
        profile_log_mean([], chain(5), origin=2)


def test_profile_tail_appears_with_coupling():
    # weak coupling: exponential core plus a flat cavity-induced tail
    p = ModelParams(n_sites=60, W=25, J=0, g_c=1)
    lat = chain(60, "open")
    decomps = [diagonalize_arrowhead(sample_disorder(p, seed=11, index=k), p) for k in range(40)]
    dist, prof = profile_log_mean(decomps, lat, origin=30)
    assert prof[0] > 0.5  # selected states concentrate on the origin
    assert np.all(prof[1:] < prof[0])
    far = prof[dist > 20]
    assert np.all(far > 0)


def test_most_localized_state_picks_origin_peak():
    p = ModelParams(n_sites=30, W=25, J=0, g_c=2)
    decomp = diagonalize_arrowhead(sample_disorder(p, seed=13), p)
    alpha = most_localized_state(decomp, 12)
    col = decomp.amplitudes[:, 12] ** 2
    assert col[alpha] == col.max()


def test_fit_localization_length_synthetic():
    xi_true = 3.0
    d = np.arange(0, 25, dtype=float)
    prof = np.exp(-2 * d / xi_true) + 1e-9  # flat tail floors the profile
    xi, _ = fit_localization_length(d, prof, tail_level=1e-9)
    assert xi == pytest.approx(xi_true, rel=0.05)
    xi_none, _ = fit_localization_length(d, np.full_like(d, 1e-9), tail_level=1e-9)
    assert np.isnan(xi_none)
