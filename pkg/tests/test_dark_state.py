import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dickesim import model
from dickesim.dark_state import dark_coefficients, jx_annihilation_check, verify_dark


def test_two_ion_equal_amplitudes_is_bell():
    state = dark_coefficients(2, 1.0, 1.0)
    assert np.max(np.abs(state.amplitudes - np.array([1, -1]) / np.sqrt(2))) < 1e-12


def test_four_ion_equal_amplitudes_expansion():
    state = dark_coefficients(4, 1.0, 1.0)
    expected = np.array([np.sqrt(3 / 8), -np.sqrt(1 / 4), np.sqrt(3 / 8)])
    assert np.max(np.abs(state.amplitudes - expected)) < 1e-12


def test_blue_off_gives_ground_state():
    state = dark_coefficients(4, 1.7, 0.0)
    assert np.array_equal(state.amplitudes, [1.0, 0.0, 0.0])


def test_red_off_gives_top_state():
    state = dark_coefficients(4, 0.0, 0.9)
    assert np.array_equal(state.amplitudes, [0.0, 0.0, 1.0])


def test_coefficient_signs_alternate():
    coeffs = dark_coefficients(6, 1.0, 1.0).coeffs
    assert coeffs[0] == 1.0
    assert np.all(np.sign(coeffs) == [1, -1, 1, -1])


def test_normalization():
    state = dark_coefficients(6, 0.37, 1.61)
    assert np.sum(state.amplitudes**2) == pytest.approx(1.0, abs=1e-12)


def test_rejects_odd_and_degenerate_input():
    with pytest.raises(ValueError):
        dark_coefficients(3, 1.0, 1.0)
    with pytest.raises(ValueError):
        dark_coefficients(4, 0.0, 0.0)
    with pytest.raises(ValueError):
        dark_coefficients(4, -1.0, 1.0)


@settings(max_examples=30, deadline=None)
@given(k=st.integers(-6, 6), n=st.sampled_from([2, 4, 6]))
def test_scale_invariance_exact_for_binary_scales(k, n):
    c = 2.0**k
    base = dark_coefficients(n, 0.75, 1.25).amplitudes
    scaled = dark_coefficients(n, c * 0.75, c * 1.25).amplitudes
    assert np.array_equal(base, scaled)


@settings(max_examples=30, deadline=None)
@given(c=st.floats(0.01, 100.0), n=st.sampled_from([2, 4, 6]))
def test_scale_invariance_general(c, n):
    base = dark_coefficients(n, 0.6, 1.4).amplitudes
    scaled = dark_coefficients(n, c * 0.6, c * 1.4).amplitudes
    assert np.max(np.abs(base - scaled)) < 1e-13


def test_residual_on_amplitude_grid():
    grid = np.linspace(0.2, 2.0, 10)
    for n in (2, 6):
        for wr in grid:
            for wb in grid:
                params = model.SystemParams(n_ions=n, omega_r=wr, omega_b=wb, delta=9.0)
                h = model.reduced_hamiltonian(params)
                assert verify_dark(dark_coefficients(n, wr, wb), h) < 1e-10


def test_perturbed_state_fails_residual():
    params = model.SystemParams(n_ions=4, omega_r=1, omega_b=1, delta=9.0)
    h = model.reduced_hamiltonian(params)
    good = dark_coefficients(4, 1.0, 1.0)
    vec = good.chain_vector.copy()
    vec[1] += 0.01  # populate the one-phonon slot
    assert np.linalg.norm(h.matrix @ vec) > 1e-3


def test_verify_dark_dimension_mismatch():
    params = model.SystemParams(n_ions=6, omega_r=1, omega_b=1, delta=9.0)
    h = model.reduced_hamiltonian(params)
    with pytest.raises(ValueError):
        verify_dark(dark_coefficients(4, 1.0, 1.0), h)


@pytest.mark.parametrize("n", [2, 4, 6])
def test_jx_annihilation(n):
    assert jx_annihilation_check(n) < 1e-10


def test_kernel_is_one_dimensional():
    for n in (2, 4, 6):
        params = model.SystemParams(n_ions=n, omega_r=0.8, omega_b=1.3, delta=5.0)
        h = model.reduced_hamiltonian(params).matrix
        rank = np.linalg.matrix_rank(h, tol=1e-12)
        assert rank == n  # exactly one null direction
        vals, vecs = np.linalg.eigh(h)
        kernel = vecs[:, np.abs(vals) < 1e-10]
        assert kernel.shape[1] == 1
        overlap = abs(np.vdot(kernel[:, 0], dark_coefficients(n, 0.8, 1.3).chain_vector))
        assert overlap == pytest.approx(1.0, abs=1e-10)
