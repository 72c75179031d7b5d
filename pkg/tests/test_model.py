from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from semiloc.lattice import chain, cube
from semiloc.model import ModelParams, build_hamiltonian, sample_disorder


def test_params_validation():
    with pytest.raises(ValueError):
        ModelParams(n_sites=1, W=1, J=1, g_c=1)
    with pytest.raises(ValueError):
        ModelParams(n_sites=4, W=-1, J=1, g_c=1)
    p = ModelParams(n_sites=100, W=25, J=1, g_c=30)
    assert p.g == pytest.approx(3.0)
    assert p.omega_e == 0 and p.omega_c == 0


def test_energy_reference_detuned():
    p = ModelParams(n_sites=4, W=0, J=0, g_c=1, delta=2.0)
    assert p.omega_e == 1.0
    assert p.omega_c == -1.0
    assert p.omega_e - p.omega_c == p.delta


def test_disorder_zero_width():
    p = ModelParams(n_sites=50, W=0, J=1, g_c=1)
    assert np.all(sample_disorder(p, seed=3).w == 0)


def test_disorder_reproducible():
    p = ModelParams(n_sites=64, W=25, J=0, g_c=1)
    a = sample_disorder(p, seed=11, index=5)
    b = sample_disorder(p, seed=11, index=5)
    assert np.array_equal(a.w, b.w)
    c = sample_disorder(p, seed=11, index=6)
    assert not np.array_equal(a.w, c.w)


def test_disorder_independent_of_draw_order():
    # realization k is a function of (seed, k) only
    p = ModelParams(n_sites=32, W=10, J=0, g_c=1)
    direct = sample_disorder(p, seed=7, index=40).w
    for index in range(3):
        sample_disorder(p, seed=7, index=index)
    assert np.array_equal(sample_disorder(p, seed=7, index=40).w, direct)


def test_disorder_moments():
    # mean and variance of W*uniform(-1/2,1/2): SE(mean) = sqrt(W^2/12/n),
    # SE(var) ~ sqrt((mu4 - sigma^4)/n), mu4 = W^4/80
    W, n = 25.0, 100_000
    p = ModelParams(n_sites=n, W=W, J=1, g_c=1)
    w = sample_disorder(p, seed=2026).w
    var = W**2 / 12
    se_mean = np.sqrt(var / n)
    assert abs(w.mean()) < 3 * se_mean
    se_var = np.sqrt((W**4 / 80 - var**2) / n)
    assert abs(w.var() - var) < 3 * se_var
    assert w.min() >= -W / 2 and w.max() <= W / 2


def test_hamiltonian_small_arrowhead():
    # N=2, J=0, delta=0: [[w1,0,g],[0,w2,g],[g,g,0]]
    p = ModelParams(n_sites=2, W=4, J=0, g_c=np.sqrt(2.0))
    lat = chain(2, "open")
    d = sample_disorder(p, seed=1)
    H = build_hamiltonian(lat, p, d)
    g = p.g
    expect = np.array([[d.w[0], 0, g], [0, d.w[1], g], [g, g, 0]])
    assert np.allclose(H, expect, atol=0, rtol=0)


def test_hamiltonian_clean_ring_spectrum():
    # g_c=0, W=0: emitter block is a clean ring, eigenvalues -2J cos(2 pi q / N)
    n = 12
    p = ModelParams(n_sites=n, W=0, J=1, g_c=0)
    H = build_hamiltonian(chain(n), p, sample_disorder(p, seed=0))
    evals = np.linalg.eigvalsh(H[:n, :n])
    expect = np.sort(-2 * np.cos(2 * np.pi * np.arange(n) / n))
    assert np.allclose(evals, expect, atol=1e-12)


def test_hamiltonian_all_couplings_off():
    p = ModelParams(n_sites=5, W=8, J=0, g_c=0, delta=3.0)
    d = sample_disorder(p, seed=4)
    H = build_hamiltonian(chain(5), p, d)
    assert np.allclose(H, np.diag(np.concatenate([p.omega_e + d.w, [p.omega_c]])))


def test_hamiltonian_dimension_mismatch():
    p = ModelParams(n_sites=5, W=1, J=1, g_c=1)
    with pytest.raises(ValueError):
        build_hamiltonian(chain(6), p, sample_disorder(p, seed=0))


@given(
    st.integers(2, 20),
    st.floats(0, 50),
    st.floats(0, 3),
    st.floats(0, 40),
    st.integers(0, 2**31),
)
def test_hamiltonian_invariants(n, W, J, g_c, seed):
    p = ModelParams(n_sites=n, W=W, J=J, g_c=g_c)
    d = sample_disorder(p, seed=seed)
    H = build_hamiltonian(chain(n), p, d)
    assert np.array_equal(H, H.T)
    # photon row: N couplings all equal to g, diagonal omega_c
    assert np.allclose(H[n, :n], p.g)
    assert H[n, n] == p.omega_c
    # emitter block trace
    assert np.isclose(np.trace(H[:n, :n]), n * p.omega_e + d.w.sum(), rtol=1e-13)


def test_hamiltonian_cube_bond_count():
    p = ModelParams(n_sites=27, W=5, J=1, g_c=2)
    H = build_hamiltonian(cube(3), p, sample_disorder(p, seed=9))
    block = H[:27, :27]
    off = block - np.diag(np.diag(block))
    assert np.count_nonzero(off) == 2 * 81  # 3N bonds, both triangles
    assert np.all(off[off != 0] == -1.0)
