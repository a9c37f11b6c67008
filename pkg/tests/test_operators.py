import dataclasses

import numpy as np
import pytest
from hypothesis import given, strategies as st
from numpy.testing import assert_allclose

from nvbath.bath import EnvironmentModel, NuclearSpin, PhysicalConstants, generate_bath, set_uniform_polarization
from nvbath.errors import ConfigurationError
from nvbath.kernels import max_abs
from nvbath.operators import (
    build_bath_hamiltonian,
    build_coupling_operator,
    complex_matrix_from_csv,
    complex_matrix_to_csv,
    initial_bath_state,
    spin_operator,
)

CONSTANTS = PhysicalConstants()


def single_nucleus_env(coupling, b_z=0.0, p=0.0):
    nucleus = NuclearSpin(position=[3.0, 0, 0], coupling=coupling, polarization=p)
    return EnvironmentModel(nuclei=(nucleus,), b_z=b_z, constants=CONSTANTS)


class TestSpinOperator:
    def test_single_spin_z(self):
        assert_allclose(spin_operator("z", 0, 1), np.diag([0.5, -0.5]), atol=0)

    def test_two_spins_first_site(self):
        assert_allclose(spin_operator("z", 0, 2), np.diag([0.5, 0.5, -0.5, -0.5]), atol=0)

    def test_two_spins_second_site(self):
        assert_allclose(spin_operator("z", 1, 2), np.diag([0.5, -0.5, 0.5, -0.5]), atol=0)

    @pytest.mark.parametrize("site", [0, 1, 2])
    def test_su2_commutator(self, site):
        ix = spin_operator("x", site, 3)
        iy = spin_operator("y", site, 3)
        iz = spin_operator("z", site, 3)
        assert max_abs(ix @ iy - iy @ ix - 1j * iz) < 1e-14

    def test_site_out_of_range(self):
        with pytest.raises(IndexError):
            spin_operator("z", 3, 3)

    def test_unknown_axis(self):
        with pytest.raises(ValueError):
            spin_operator("w", 0, 2)


class TestBathHamiltonian:
    def test_zero_field_gives_zero_matrix(self):
        env = single_nucleus_env([0.1, 0.2, 0.3], b_z=0.0)
        assert max_abs(build_bath_hamiltonian(env)) == 0.0

    def test_single_spin_at_0p2_tesla(self):
        env = single_nucleus_env([0, 0, 0.5], b_z=0.2)
        expected = np.pi * CONSTANTS.gamma_n_mhz_per_t * 0.2
        assert_allclose(build_bath_hamiltonian(env), np.diag([expected, -expected]), atol=1e-14)

    def test_diagonal_in_product_basis(self):
        env = dataclasses.replace(generate_bath(seed=4, count=5), b_z=0.2)
        h = build_bath_hamiltonian(env)
        assert max_abs(h - np.diag(np.diag(h))) == 0.0


class TestCouplingOperator:
    def test_zero_couplings_give_zero_matrix(self):
        env = single_nucleus_env([0.0, 0.0, 0.0])
        assert max_abs(build_coupling_operator(env)) == 0.0

    def test_single_z_coupling(self):
        env = single_nucleus_env([0, 0, 0.7])
        assert_allclose(build_coupling_operator(env), np.diag([0.7 * np.pi, -0.7 * np.pi]), atol=1e-14)

    def test_hermitian_for_random_environment(self):
        env = generate_bath(seed=12, count=5)
        v = build_coupling_operator(env)
        assert max_abs(v - v.conj().T) < 1e-12

    def test_commutes_with_free_hamiltonian_only_without_field(self):
        env = dataclasses.replace(generate_bath(seed=12, count=3), b_z=0.2)
        h = build_bath_hamiltonian(env)
        v = build_coupling_operator(env)
        assert max_abs(h @ v - v @ h) > 1e-3
        env0 = dataclasses.replace(env, b_z=0.0)
        h0 = build_bath_hamiltonian(env0)
        assert max_abs(h0 @ v - v @ h0) == 0.0


class TestInitialBathState:
    def test_unpolarized_is_maximally_mixed(self):
        env = set_uniform_polarization(generate_bath(seed=7, count=5), 0.0)
        assert_allclose(initial_bath_state(env), np.eye(32) / 32, atol=0)

    def test_fully_polarized_two_spins_is_pure(self):
        env = generate_bath(seed=7, count=2)
        env = set_uniform_polarization(env, 1.0)
        expected = np.zeros((4, 4))
        expected[0, 0] = 1.0
        assert_allclose(initial_bath_state(env), expected, atol=0)

    def test_partial_polarization_single_spin(self):
        env = set_uniform_polarization(generate_bath(seed=7, count=1), 0.4)
        assert_allclose(initial_bath_state(env), np.diag([0.7, 0.3]), atol=1e-15)

    @given(st.lists(st.floats(-1, 1), min_size=1, max_size=5))
    def test_purity_formula(self, polarizations):
        nuclei = tuple(
            NuclearSpin(position=[3.0 + i, 0, 0], coupling=[0, 0, 0.1], polarization=p)
            for i, p in enumerate(polarizations)
        )
        env = EnvironmentModel(nuclei=nuclei, constants=CONSTANTS)
        r0 = initial_bath_state(env)
        purity = np.trace(r0 @ r0).real
        expected = np.prod([(1 + p**2) / 2 for p in polarizations])
        assert purity == pytest.approx(expected, rel=1e-12)
        assert (purity == pytest.approx(1.0, abs=1e-12)) == all(
            abs(p) == 1.0 for p in polarizations
        )

    def test_trace_one_and_psd(self):
        env = set_uniform_polarization(generate_bath(seed=9, count=4), -0.6)
        r0 = initial_bath_state(env)
        assert np.trace(r0).real == pytest.approx(1.0, abs=1e-12)
        assert np.linalg.eigvalsh(r0)[0] >= 0


class TestSizeCap:
    def test_more_than_ten_spins_rejected(self):
        nuclei = tuple(
            NuclearSpin(position=[3.0 + 0.1 * i, 0, 0], coupling=[0, 0, 0.1])
            for i in range(11)
        )
        with pytest.raises(ConfigurationError):
            EnvironmentModel(nuclei=nuclei, constants=CONSTANTS)


class TestMatrixCsv:
    def test_roundtrip(self, tmp_path):
        rng = np.random.default_rng(13)
        m = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
        path = tmp_path / "matrix.csv"
        complex_matrix_to_csv(m, path)
        back = complex_matrix_from_csv(path)
        assert_allclose(back, m, rtol=1e-10, atol=1e-12)
