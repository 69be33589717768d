#!/usr/bin/env python3
"""
Tests for the dense linear algebra primitives
Eigensolvers, spectra, PSD square roots and the rho * rho_tilde spectrum
"""

import os
import sys

import numpy as np
import pytest

sys.path.append(os.path.dirname(__file__))

from numerics.linalg_core import (
    Spectrum, hermitian_eig, hermitian_eigvals, hermitian_part, jacobi_hermitian_eig,
    product_sqrt_eigvals, psd_sqrt, spectrum_of
)
from utils.error_handler import (
    ConvergenceFailure, DimensionMismatch, InvalidState, InvalidTrace, NegativeEigenvalue,
    NegativeProductEigenvalue, NotHermitian, NotSquare
)


def random_hermitian(rng, n):
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (g + g.conj().T) / 2


def random_density(rng, n):
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    rho = g @ g.conj().T
    rho = rho / np.trace(rho).real
    return 0.9 * rho + 0.1 * np.eye(n) / n


def test_spectrum_sorts_and_clamps():
    """Eigenvalues are sorted descending and tiny negatives clamp to zero"""
    spectrum = Spectrum.from_eigenvalues([0.2, -5e-11, 0.8])
    assert list(spectrum.values) == [0.8, 0.2, 0.0]
    assert spectrum.max == 0.8
    assert len(spectrum) == 3
    assert spectrum.purity() == pytest.approx(0.68)


def test_spectrum_rejects_negative_and_bad_trace():
    with pytest.raises(NegativeEigenvalue):
        Spectrum.from_eigenvalues([1.1, -0.1])
    with pytest.raises(InvalidTrace):
        Spectrum.from_eigenvalues([0.5, 0.4])
    assert Spectrum.from_eigenvalues([0.5, 0.4], check_normalization=False).max == 0.5


def test_spectrum_values_are_read_only():
    spectrum = Spectrum.from_eigenvalues([0.5, 0.5])
    with pytest.raises(ValueError):
        spectrum.values[0] = 1.0


def test_hermitian_part_validation():
    with pytest.raises(NotSquare):
        hermitian_part(np.zeros((2, 3)))
    with pytest.raises(NotHermitian):
        hermitian_part(np.array([[0, 1], [0, 0]]))
    with pytest.raises(InvalidState):
        hermitian_part(np.array([[np.nan, 0], [0, 1]]))
    m = np.array([[1, 1e-12], [0, 1]], dtype=complex)
    np.testing.assert_allclose(hermitian_part(m), hermitian_part(m).conj().T)


def test_lapack_eigendecomposition_reconstructs():
    rng = np.random.default_rng(1)
    m = random_hermitian(rng, 8)
    vals, vecs = hermitian_eig(m)
    assert np.all(np.diff(vals) <= 0)
    np.testing.assert_allclose(vecs @ np.diag(vals) @ vecs.conj().T, m, atol=1e-10)
    np.testing.assert_allclose(vecs.conj().T @ vecs, np.eye(8), atol=1e-10)


@pytest.mark.parametrize("seed", range(10))
def test_jacobi_matches_lapack(seed):
    """Complex cyclic Jacobi reproduces LAPACK eigenvalues and yields a unitary eigenbasis"""
    rng = np.random.default_rng(seed)
    m = random_hermitian(rng, 6)
    jacobi_vals, jacobi_vecs = jacobi_hermitian_eig(m)
    np.testing.assert_allclose(jacobi_vals, hermitian_eigvals(m, method='lapack'), atol=1e-10)
    np.testing.assert_allclose(jacobi_vecs.conj().T @ jacobi_vecs, np.eye(6), atol=1e-10)
    np.testing.assert_allclose(jacobi_vecs @ np.diag(jacobi_vals) @ jacobi_vecs.conj().T, m,
                               atol=1e-9)


def test_jacobi_selectable_through_method():
    m = np.array([[2, 1j], [-1j, 2]])
    vals, _ = hermitian_eig(m, method='jacobi')
    np.testing.assert_allclose(vals, [3, 1], atol=1e-12)


def test_jacobi_diagonal_input_needs_no_sweeps():
    vals, vecs = jacobi_hermitian_eig(np.diag([1.0, 3.0, 2.0]))
    np.testing.assert_allclose(vals, [3, 2, 1])
    np.testing.assert_allclose(np.abs(vecs), np.eye(3)[:, [1, 2, 0]])


def test_jacobi_sweep_cap_raises():
    rng = np.random.default_rng(3)
    with pytest.raises(ConvergenceFailure):
        jacobi_hermitian_eig(random_hermitian(rng, 5), max_sweeps=0)


def test_spectrum_of_density_matrix():
    rng = np.random.default_rng(4)
    rho = random_density(rng, 5)
    spectrum = spectrum_of(rho)
    assert spectrum.values.sum() == pytest.approx(1.0, abs=1e-12)
    assert spectrum.dimension == 5


def test_psd_sqrt_squares_back():
    rng = np.random.default_rng(5)
    rho = random_density(rng, 6)
    root = psd_sqrt(rho)
    np.testing.assert_allclose(root @ root, rho, atol=1e-12)
    with pytest.raises(NegativeEigenvalue):
        psd_sqrt(np.diag([1.0, -0.5]))


def test_psd_sqrt_squares_back_on_random_psd_matrices():
    """Full-rank and rank-deficient PSD inputs of dimension 1..20"""
    rng = np.random.default_rng(6)
    for _ in range(100):
        n = int(rng.integers(1, 21))
        rank = int(rng.integers(1, n + 1))
        g = rng.normal(size=(n, rank)) + 1j * rng.normal(size=(n, rank))
        m = g @ g.conj().T
        m = m / np.trace(m).real
        root = psd_sqrt(m)
        np.testing.assert_allclose(root, root.conj().T, atol=1e-14)
        assert np.linalg.eigvalsh(root).min() >= -1e-12
        np.testing.assert_allclose(root @ root, m, atol=1e-10)


def test_product_sqrt_eigvals_of_rho_with_itself_is_its_spectrum():
    rng = np.random.default_rng(8)
    for _ in range(50):
        rho = random_density(rng, int(rng.integers(2, 9)))
        expected = np.sort(np.linalg.eigvalsh(rho))[::-1]
        np.testing.assert_allclose(product_sqrt_eigvals(rho, rho), expected, atol=1e-9)
    pure = np.zeros((3, 3))
    pure[1, 1] = 1.0
    assert product_sqrt_eigvals(pure, pure) == pytest.approx([1.0, 0.0, 0.0], abs=1e-9)



def test_product_sqrt_eigvals_simple_cases():
    assert product_sqrt_eigvals(np.diag([0.5, 0.5]), np.diag([0.5, 0.5])) == pytest.approx([0.5, 0.5])
    assert product_sqrt_eigvals(np.diag([1.0, 0.0]), np.diag([0.0, 1.0])) == pytest.approx([0.0, 0.0])


def test_product_sqrt_eigvals_errors():
    with pytest.raises(DimensionMismatch):
        product_sqrt_eigvals(np.eye(2) / 2, np.eye(3) / 3)
    with pytest.raises(NegativeProductEigenvalue):
        product_sqrt_eigvals(np.diag([0.5, 0.5]), np.diag([1.0, -1.0]))


def test_product_sqrt_eigvals_matches_brute_force():
    """Hermitian sqrt(rho) rho_tilde sqrt(rho) route agrees with eig(rho rho_tilde) on 100 cases"""
    rng = np.random.default_rng(2024)
    for _ in range(100):
        rho = random_density(rng, 6)
        rho_tilde = random_density(rng, 6)
        direct = np.linalg.eigvals(rho @ rho_tilde)
        assert np.max(np.abs(direct.imag)) < 1e-9
        expected = np.sort(np.sqrt(np.clip(direct.real, 0.0, None)))[::-1]
        np.testing.assert_allclose(product_sqrt_eigvals(rho, rho_tilde), expected, atol=1e-8)
