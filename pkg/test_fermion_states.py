#!/usr/bin/env python3
"""
Tests for fermionic state construction, validation and the partial trace
"""

import math
import os
import sys

import numpy as np
import pytest

sys.path.append(os.path.dirname(__file__))

from numerics.angular_momentum import SpinLabel, antisymmetric_basis, swap_matrix
from states.fermion_states import (
    DensityMatrix, antisymmetric_sector_basis, antisymmetrizer, basis_vector, density_from_vector,
    dim6_pure_vector, dim6_state, general_werner, general_werner_spectra, general_werner_vector,
    gisin_state, mix, partial_trace_single, random_antisymmetric_pure, random_separable,
    sector_identity, slater2, slater_n, theta_state, werner_state
)
from utils.error_handler import (
    DimensionMismatch, DimensionTooLarge, InvalidDimensions, InvalidState, InvalidTrace,
    NegativeEigenvalue, NotHermitian, NotOrthonormal, OddDimension, ParameterOutOfRange,
    RepeatedIndex, SupportLeak, UnknownFamily
)


def projector(vec):
    return vec @ vec.conj().T


class TestSlaterDeterminants:
    def test_slater2_is_normalized_and_antisymmetric(self):
        psi = slater2(basis_vector(4, 0), basis_vector(4, 1))
        assert np.linalg.norm(psi) == pytest.approx(1.0)
        np.testing.assert_allclose(swap_matrix(4) @ psi, -psi, atol=1e-15)

    def test_slater2_reduced_state(self):
        rho = density_from_vector(slater2(basis_vector(4, 0), basis_vector(4, 2)), 4, 2)
        reduced = partial_trace_single(rho).matrix
        np.testing.assert_allclose(reduced, np.diag([0.5, 0, 0.5, 0]), atol=1e-15)
        assert partial_trace_single(rho).purity() == pytest.approx(0.5)

    def test_slater2_rejects_non_orthonormal_inputs(self):
        e0 = basis_vector(4, 0)
        with pytest.raises(NotOrthonormal):
            slater2(e0, e0)
        with pytest.raises(NotOrthonormal):
            slater2(2 * e0, basis_vector(4, 1))

    def test_slater_n_three_particles(self):
        psi = slater_n(4, [1, 2, 3])
        assert psi.shape == (64, 1)
        assert np.linalg.norm(psi) == pytest.approx(1.0)
        rho = density_from_vector(psi, 4, 3)
        reduced = partial_trace_single(rho).matrix
        np.testing.assert_allclose(reduced, np.diag([1 / 3, 1 / 3, 1 / 3, 0]), atol=1e-14)

    def test_slater_n_agrees_with_slater2(self):
        np.testing.assert_allclose(
            slater_n(4, [2, 4]), slater2(basis_vector(4, 1), basis_vector(4, 3)), atol=1e-15)

    @pytest.mark.parametrize("n, indices, error", [
        (4, [1, 1], RepeatedIndex),
        (4, [0, 2], ParameterOutOfRange),
        (4, [1, 5], ParameterOutOfRange),
        (4, [1], InvalidDimensions),
    ])
    def test_slater_n_errors(self, n, indices, error):
        with pytest.raises(error):
            slater_n(n, indices)


class TestSectorBasis:
    @pytest.mark.parametrize("n, N, d", [(4, 2, 6), (6, 2, 15), (4, 3, 4), (5, 3, 10)])
    def test_isometry_shape_and_orthonormality(self, n, N, d):
        q = antisymmetric_sector_basis(n, N)
        assert q.shape == (n ** N, d)
        np.testing.assert_allclose(q.conj().T @ q, np.eye(d), atol=1e-14)

    @pytest.mark.parametrize("n", [4, 6])
    def test_two_particle_projector_is_one_minus_swap(self, n):
        expected = (np.eye(n * n) - swap_matrix(n)) / 2
        np.testing.assert_allclose(antisymmetrizer(n, 2), expected, atol=1e-14)

    @pytest.mark.parametrize("two_s", [3, 5])
    def test_projector_is_sum_of_even_j_coupled_projectors(self, two_s):
        b = antisymmetric_basis(SpinLabel(two_s)).matrix()
        n = two_s + 1
        np.testing.assert_allclose(b @ b.conj().T, antisymmetrizer(n, 2), atol=1e-14)

    def test_sector_identity_has_unit_trace(self):
        assert np.trace(sector_identity(6, 2)).real == pytest.approx(1.0)
        rho = DensityMatrix.create(sector_identity(6, 2), 6, 2)
        np.testing.assert_allclose(rho.spectrum().values, np.full(15, 1 / 15), atol=1e-14)


class TestValidation:
    def test_rejects_non_hermitian(self):
        m = sector_identity(4, 2).copy()
        m[0, 1] += 0.1
        with pytest.raises(NotHermitian):
            DensityMatrix.create(m, 4, 2)

    def test_rejects_bad_trace(self):
        with pytest.raises(InvalidTrace):
            DensityMatrix.create(2 * sector_identity(4, 2), 4, 2)

    def test_rejects_symmetric_support(self):
        e0 = basis_vector(4, 0)
        with pytest.raises(SupportLeak):
            DensityMatrix.create(projector(np.kron(e0, e0)), 4, 2)

    def test_rejects_negative_eigenvalue(self):
        q = antisymmetric_sector_basis(4, 2)
        m = 1.5 * projector(q[:, [0]]) - 0.5 * projector(q[:, [1]])
        with pytest.raises(NegativeEigenvalue):
            DensityMatrix.create(m, 4, 2)

    def test_rejects_wrong_shape(self):
        with pytest.raises(DimensionMismatch):
            DensityMatrix.create(np.eye(6) / 6, 4, 2)

    def test_rejects_oversized_space(self):
        with pytest.raises(DimensionTooLarge):
            DensityMatrix.create(np.eye(2), 10, 4)

    def test_rejects_more_particles_than_modes(self):
        with pytest.raises(InvalidDimensions):
            DensityMatrix.create(np.eye(8), 2, 3)

    def test_density_from_vector_requires_unit_norm(self):
        with pytest.raises(InvalidState):
            density_from_vector(2 * slater_n(4, [1, 2]), 4, 2)

    def test_validated_matrix_is_read_only(self):
        rho = werner_state(0.5)
        with pytest.raises(ValueError):
            rho.matrix[0, 0] = 1.0


class TestFamilies:
    @pytest.mark.parametrize("p", [0.0, 0.3, 1.0])
    def test_werner_spectrum_and_reduction(self, p):
        rho = werner_state(p)
        expected = [p + (1 - p) / 6] + [(1 - p) / 6] * 5
        np.testing.assert_allclose(rho.spectrum().values, expected, atol=1e-13)
        np.testing.assert_allclose(partial_trace_single(rho).matrix, np.eye(4) / 4, atol=1e-14)

    @pytest.mark.parametrize("p", [0.0, 0.4, 1.0])
    def test_gisin_spectrum_and_reduction(self, p):
        rho = gisin_state(p)
        expected = sorted([p, (1 - p) / 2, (1 - p) / 2, 0, 0, 0], reverse=True)
        np.testing.assert_allclose(rho.spectrum().values, expected, atol=1e-13)
        np.testing.assert_allclose(partial_trace_single(rho).matrix, np.eye(4) / 4, atol=1e-14)

    def test_theta_endpoints_are_slater_determinants(self):
        for theta in (0.0, math.pi / 2):
            rho = theta_state(theta)
            assert rho.is_pure()
            assert partial_trace_single(rho).purity() == pytest.approx(0.5)
        assert partial_trace_single(theta_state(math.pi / 4)).purity() == pytest.approx(0.25)

    def test_spectrum_length_is_sector_dimension(self):
        assert len(theta_state(0.3).spectrum()) == 6
        assert len(dim6_state(1, 0.5).spectrum()) == 15

    @pytest.mark.parametrize("which", [1, 2, 3])
    def test_dim6_vectors_are_unit_antisymmetric(self, which):
        vec = dim6_pure_vector(which)
        assert np.linalg.norm(vec) == pytest.approx(1.0)
        np.testing.assert_allclose(swap_matrix(6) @ vec, -vec, atol=1e-15)
        assert dim6_state(which, 1.0).is_pure()

    def test_dim6_unknown_member(self):
        with pytest.raises(UnknownFamily):
            dim6_pure_vector(4)

    @pytest.mark.parametrize("builder", [werner_state, gisin_state])
    @pytest.mark.parametrize("p", [-0.1, 1.1, float('nan')])
    def test_mixing_parameter_range(self, builder, p):
        with pytest.raises(ParameterOutOfRange):
            builder(p)

    @pytest.mark.parametrize("p", [0.0, 0.25, 0.8])
    def test_general_werner_reproduces_two_fermion_werner_spectra(self, p):
        general = general_werner(2, 2, p)
        np.testing.assert_allclose(general.spectrum().values, werner_state(p).spectrum().values,
                                   atol=1e-13)
        np.testing.assert_allclose(partial_trace_single(general).matrix, np.eye(4) / 4,
                                   atol=1e-14)

    def test_general_werner_dimensions(self):
        rho = general_werner(2, 3, 0.5)
        assert (rho.n, rho.N, rho.sector_dimension) == (6, 2, 15)
        three = general_werner(3, 2, 1.0)
        np.testing.assert_allclose(partial_trace_single(three).matrix, np.eye(6) / 6, atol=1e-14)

    def test_general_werner_guards(self):
        with pytest.raises(InvalidDimensions):
            general_werner_vector(2, 1)
        with pytest.raises(DimensionTooLarge):
            general_werner(5, 2, 0.5)
        with pytest.raises(DimensionTooLarge):
            general_werner_vector(5, 4)

    def test_general_werner_dense_above_old_limit(self):
        """n = 34, N = 2: 1156 product states, still a dense family"""
        rho = general_werner(2, 17, 0.5)
        assert rho.dimension == 1156
        assert rho.sector_dimension == 561
        expected = [0.5 + 0.5 / 561] + [0.5 / 561] * 560
        np.testing.assert_allclose(rho.spectrum().values, expected, atol=1e-12)
        np.testing.assert_allclose(partial_trace_single(rho).matrix, np.eye(34) / 34, atol=1e-13)

    @pytest.mark.parametrize("N, k, p", [(2, 2, 0.3), (3, 2, 0.7), (2, 3, 1.0), (3, 4, 0.45)])
    def test_general_werner_spectra_match_dense_state(self, N, k, p):
        global_spectrum, reduced_spectrum = general_werner_spectra(N, k, p)
        rho = general_werner(N, k, p)
        np.testing.assert_allclose(global_spectrum.values, rho.spectrum().values, atol=1e-12)
        np.testing.assert_allclose(reduced_spectrum.values,
                                   partial_trace_single(rho).spectrum().values, atol=1e-12)

    def test_general_werner_spectra_beyond_dense_limit(self):
        """n = 20, N = 4: 160000 product states, spectra only"""
        global_spectrum, reduced_spectrum = general_werner_spectra(4, 5, 0.2)
        assert len(global_spectrum) == 4845
        assert global_spectrum.max == pytest.approx(0.2 + 0.8 / 4845)
        np.testing.assert_allclose(reduced_spectrum.values, np.full(20, 1 / 20), atol=1e-13)
        with pytest.raises(DimensionTooLarge):
            general_werner(4, 5, 0.2)


class TestMixingAndSampling:
    def test_mix_is_linear_under_partial_trace(self):
        a = random_separable(4, 3, seed=1)
        b = random_antisymmetric_pure(4, seed=2)
        mixed = mix([a, b], [0.3, 0.7])
        expected = 0.3 * partial_trace_single(a).matrix + 0.7 * partial_trace_single(b).matrix
        np.testing.assert_allclose(partial_trace_single(mixed).matrix, expected, atol=1e-14)

    def test_mix_errors(self):
        rho = werner_state(0.5)
        with pytest.raises(DimensionMismatch):
            mix([rho, rho], [1.0])
        with pytest.raises(ParameterOutOfRange):
            mix([rho, rho], [0.7, 0.7])
        with pytest.raises(DimensionMismatch):
            mix([rho, dim6_state(1, 0.5)], [0.5, 0.5])

    def test_sampling_is_seed_deterministic(self):
        np.testing.assert_array_equal(random_separable(4, 5, seed=7).matrix,
                                      random_separable(4, 5, seed=7).matrix)
        np.testing.assert_array_equal(random_antisymmetric_pure(6, seed=3).matrix,
                                      random_antisymmetric_pure(6, seed=3).matrix)

    def test_sampling_errors(self):
        with pytest.raises(OddDimension):
            random_separable(5, 2, seed=0)
        with pytest.raises(ParameterOutOfRange):
            random_separable(4, 0, seed=0)
        with pytest.raises(OddDimension):
            random_antisymmetric_pure(3, seed=0)

    @pytest.mark.parametrize("n", [4, 6])
    def test_pure_state_purity_bounds(self, n):
        """1/n <= Tr(rho_r^2) <= 1/2 for pure two-fermion states"""
        for seed in range(250):
            purity = partial_trace_single(random_antisymmetric_pure(n, seed=seed)).purity()
            assert 1 / n - 1e-12 <= purity <= 0.5 + 1e-12
