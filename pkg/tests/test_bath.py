import dataclasses

import numpy as np
import pytest
from hypothesis import given, strategies as st
from numpy.testing import assert_allclose

from nvbath import bath
from nvbath.bath import (
    BathConfig,
    EnvironmentModel,
    NuclearSpin,
    PhysicalConstants,
    PLANCK_H,
    compute_coupling,
    diamond_lattice_sites,
    environment_to_csv,
    generate_bath,
    load_bath_config,
    save_bath_config,
    set_uniform_polarization,
)
from nvbath.errors import ConfigurationError

CONSTANTS = PhysicalConstants()


def dipolar_prefactor_mhz(r_angstrom):
    # independent SI evaluation: (mu0/4pi) h gamma_e gamma_n / r^3, in MHz
    r_m = r_angstrom * 1e-10
    return 1e-7 * PLANCK_H * 28.08e9 * 10.71e6 / r_m**3 / 1e6


class TestComputeCoupling:
    def test_position_on_z_axis_standard(self):
        c = dipolar_prefactor_mhz(4.0)
        assert_allclose(compute_coupling([0, 0, 4.0], CONSTANTS), [0, 0, -2 * c], atol=1e-15)

    def test_position_on_z_axis_paper_literal(self):
        c = dipolar_prefactor_mhz(4.0)
        got = compute_coupling([0, 0, 4.0], CONSTANTS, form="paper_literal")
        assert_allclose(got, [c, c, -2 * c], atol=1e-15)

    def test_position_on_x_axis_standard(self):
        # r.z = 0 kills the anisotropic term; only the delta_zj survives
        c = dipolar_prefactor_mhz(5.0)
        assert_allclose(compute_coupling([5.0, 0, 0], CONSTANTS), [0, 0, c], atol=1e-15)

    def test_hand_evaluated_magnitude_at_5_angstrom(self):
        got = compute_coupling([5.0, 0, 0], CONSTANTS)[2]
        assert got == pytest.approx(0.16, abs=5e-3)
        assert got == pytest.approx(dipolar_prefactor_mhz(5.0), rel=1e-12)

    def test_zero_position_rejected(self):
        with pytest.raises(ValueError):
            compute_coupling([0, 0, 0], CONSTANTS)

    def test_unknown_form_rejected(self):
        with pytest.raises(ConfigurationError):
            compute_coupling([1, 2, 3], CONSTANTS, form="isotropic")

    @given(st.lists(st.floats(-10, 10), min_size=3, max_size=3).filter(
        lambda v: np.linalg.norm(v) > 0.5))
    def test_inverse_cube_scaling(self, position):
        position = np.array(position)
        near = compute_coupling(position, CONSTANTS)
        far = compute_coupling(2 * position, CONSTANTS)
        assert_allclose(far, near / 8, rtol=1e-12, atol=1e-18)

    @given(st.floats(0, 2 * np.pi), st.lists(st.floats(-8, 8), min_size=3, max_size=3).filter(
        lambda v: np.linalg.norm(v) > 0.5))
    def test_z_rotation_leaves_azz_invariant(self, angle, position):
        position = np.array(position)
        rot = np.array([
            [np.cos(angle), -np.sin(angle), 0],
            [np.sin(angle), np.cos(angle), 0],
            [0, 0, 1],
        ])
        original = compute_coupling(position, CONSTANTS)[2]
        rotated = compute_coupling(rot @ position, CONSTANTS)[2]
        assert rotated == pytest.approx(original, rel=1e-9, abs=1e-15)


def brute_force_shell_count(r_min, r_max, a0):
    # direct triple loop over conventional cells, independent of the library
    count = 0
    reach = int(np.ceil(r_max / a0)) + 2
    fcc = [(0, 0, 0), (0, 0.5, 0.5), (0.5, 0, 0.5), (0.5, 0.5, 0)]
    basis = [(0, 0, 0), (0.25, 0.25, 0.25)]
    for i in range(-reach, reach + 1):
        for j in range(-reach, reach + 1):
            for k in range(-reach, reach + 1):
                for f in fcc:
                    for b in basis:
                        x = a0 * (i + f[0] + b[0])
                        y = a0 * (j + f[1] + b[1])
                        z = a0 * (k + f[2] + b[2])
                        if r_min <= np.sqrt(x * x + y * y + z * z) <= r_max:
                            count += 1
    return count


class TestGenerateBath:
    def test_deterministic_for_fixed_seed(self):
        first = generate_bath(seed=7, count=5)
        second = generate_bath(seed=7, count=5)
        for a, b in zip(first.nuclei, second.nuclei):
            assert np.array_equal(a.position, b.position)
            assert np.array_equal(a.coupling, b.coupling)

    def test_different_seeds_differ(self):
        a = generate_bath(seed=1, count=5)
        b = generate_bath(seed=2, count=5)
        assert not np.array_equal(
            np.array([n.position for n in a.nuclei]),
            np.array([n.position for n in b.nuclei]),
        )

    def test_five_spins_give_dim_32(self):
        env = generate_bath(seed=7, count=5)
        assert env.dim == 32
        assert 2 * env.dim == 64

    def test_too_small_shell_raises(self):
        a0 = CONSTANTS.lattice_constant_angstrom
        assert brute_force_shell_count(3.0, 3.5, a0) < 200
        with pytest.raises(ConfigurationError, match="3"):
            generate_bath(seed=7, count=200, r_min=3.0, r_max=3.5)

    def test_positions_lie_on_diamond_lattice(self):
        env = generate_bath(seed=11, count=8)
        a0 = env.constants.lattice_constant_angstrom
        for nucleus in env.nuclei:
            ok = False
            for offset in (np.zeros(3), np.full(3, 0.25)):
                doubled = 2 * (nucleus.position / a0 - offset)
                rounded = np.round(doubled)
                if np.max(np.abs(doubled - rounded)) < 1e-9 / a0 and int(rounded.sum()) % 2 == 0:
                    ok = True
            assert ok, f"{nucleus.position} is not a diamond lattice site"

    def test_positions_within_shell_and_distinct(self):
        env = generate_bath(seed=3, count=10, r_min=2.5, r_max=8.0)
        radii = [np.linalg.norm(n.position) for n in env.nuclei]
        assert all(2.5 <= r <= 8.0 for r in radii)
        assert len({tuple(n.position) for n in env.nuclei}) == 10

    def test_couplings_match_positions(self):
        env = generate_bath(seed=5, count=4, coupling_form="paper_literal")
        for nucleus in env.nuclei:
            expected = compute_coupling(nucleus.position, env.constants, "paper_literal")
            assert_allclose(nucleus.coupling, expected, rtol=0, atol=0)

    def test_count_bounds(self):
        with pytest.raises(ConfigurationError):
            generate_bath(seed=1, count=0)
        with pytest.raises(ConfigurationError):
            generate_bath(seed=1, count=11)

    def test_bad_shell_rejected(self):
        with pytest.raises(ConfigurationError):
            generate_bath(seed=1, count=2, r_min=5.0, r_max=3.0)


class TestPolarization:
    def test_zero_polarization(self):
        env = set_uniform_polarization(generate_bath(seed=7, count=5), 0.0)
        assert_allclose(env.polarizations, 0.0)

    def test_full_polarization(self):
        env = set_uniform_polarization(generate_bath(seed=7, count=5), 1.0)
        assert_allclose(env.polarizations, 1.0)

    def test_out_of_range_rejected(self):
        env = generate_bath(seed=7, count=5)
        with pytest.raises(ValueError):
            set_uniform_polarization(env, 1.2)

    @given(st.floats(-1, 1))
    def test_any_valid_value_accepted(self, p):
        env = set_uniform_polarization(generate_bath(seed=2, count=3), p)
        assert_allclose(env.polarizations, p)


class TestTypes:
    def test_constants_must_be_positive(self):
        with pytest.raises(ConfigurationError, match="gamma_n"):
            PhysicalConstants(gamma_n_mhz_per_t=-1.0)

    def test_nucleus_at_origin_rejected(self):
        with pytest.raises(ValueError):
            NuclearSpin(position=[0, 0, 0], coupling=[0, 0, 0])

    def test_duplicate_positions_rejected(self):
        n = NuclearSpin(position=[1, 0, 0], coupling=[0, 0, 1])
        with pytest.raises(ConfigurationError):
            EnvironmentModel(nuclei=(n, n))

    def test_lattice_enumeration_sorted_and_bounded(self):
        sites = diamond_lattice_sites(2.0, 6.0, CONSTANTS.lattice_constant_angstrom)
        radii = np.linalg.norm(sites, axis=1)
        assert np.all((radii >= 2.0) & (radii <= 6.0))
        order = np.lexsort((sites[:, 2], sites[:, 1], sites[:, 0]))
        assert np.array_equal(order, np.arange(len(sites)))


class TestSerialization:
    def test_bath_config_roundtrip(self, tmp_path):
        config = BathConfig(seed=9, count=4, b_z=0.2, p=0.4, coupling_form="paper_literal")
        path = tmp_path / "bath.yaml"
        save_bath_config(config, path)
        loaded = load_bath_config(path)
        assert loaded == config
        first, second = config.build(), loaded.build()
        for a, b in zip(first.nuclei, second.nuclei):
            assert np.array_equal(a.position, b.position)

    def test_unknown_config_key_rejected(self):
        with pytest.raises(ConfigurationError, match="wobble"):
            BathConfig.from_dict({"wobble": 3})

    def test_environment_csv(self, tmp_path):
        env = generate_bath(seed=7, count=5)
        path = tmp_path / "env.csv"
        environment_to_csv(env, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "index,x_A,y_A,z_A,Azx_MHz,Azy_MHz,Azz_MHz"
        assert len(lines) == 6
        first = lines[1].split(",")
        assert first[0] == "0"
        assert float(first[1]) == pytest.approx(env.nuclei[0].position[0], rel=1e-10)
        assert float(first[4]) == pytest.approx(env.nuclei[0].coupling[0], rel=1e-10)
