"""Spin-1/2 operators, bath Hamiltonians and the initial product bath state.

Basis convention: product z-basis with site 0 as the most significant factor
of the Kronecker chain.  Hamiltonian matrix elements are angular frequencies
(rad/us) built from MHz inputs, so propagators are plain exp(-i H t) with t
in microseconds.
"""

from __future__ import annotations

import functools

import numpy as np

from .bath import MAX_BATH_SPINS, EnvironmentModel
from .errors import ConfigurationError, ContractViolationError
from .kernels import hermitian_eigenvalues, max_abs

# Spin-1/2 operators, eigenvalues +-1/2.
SPIN_HALF = {
    "x": np.array([[0.0, 0.5], [0.5, 0.0]], dtype=complex),
    "y": np.array([[0.0, -0.5j], [0.5j, 0.0]], dtype=complex),
    "z": np.array([[0.5, 0.0], [0.0, -0.5]], dtype=complex),
}


def spin_operator(axis: str, site: int, total_sites: int) -> np.ndarray:
    """Embed the single-spin operator I^axis at ``site`` into the 2**K bath space."""
    if axis not in SPIN_HALF:
        raise ValueError(f"axis must be one of x, y, z, got {axis!r}")
    if not 0 <= site < total_sites:
        raise IndexError(f"site {site} out of range for {total_sites} spins")
    factors = [np.eye(2, dtype=complex)] * total_sites
    factors[site] = SPIN_HALF[axis]
    return functools.reduce(np.kron, factors)


def _check_size(env: EnvironmentModel) -> int:
    if env.size > MAX_BATH_SPINS:
        raise ConfigurationError(f"bath of {env.size} spins exceeds cap {MAX_BATH_SPINS}")
    return env.size


def build_bath_hamiltonian(env: EnvironmentModel) -> np.ndarray:
    """Free bath Hamiltonian sum_k omega_n I^z_k, omega_n = 2 pi gamma_n B_z."""
    k = _check_size(env)
    omega_n = 2 * np.pi * env.constants.gamma_n_mhz_per_t * env.b_z
    h = np.zeros((env.dim, env.dim), dtype=complex)
    for site in range(k):
        h += omega_n * spin_operator("z", site, k)
    return h


def build_coupling_operator(env: EnvironmentModel) -> np.ndarray:
    """Hyperfine operator sum_k sum_j 2 pi A^zj_k I^j_k (angular MHz)."""
    k = _check_size(env)
    v = np.zeros((env.dim, env.dim), dtype=complex)
    for site, nucleus in enumerate(env.nuclei):
        for j, axis in enumerate("xyz"):
            coefficient = 2 * np.pi * nucleus.coupling[j]
            if coefficient != 0.0:
                v += coefficient * spin_operator(axis, site, k)
    return v


def initial_bath_state(env: EnvironmentModel) -> np.ndarray:
    """Product state of single-spin states diag((1+p_k)/2, (1-p_k)/2)."""
    _check_size(env)
    factors = []
    for nucleus in env.nuclei:
        p = nucleus.polarization
        if abs(p) > 1:
            raise ValueError(f"polarization {p} outside [-1, 1]")
        factors.append(np.diag([(1 + p) / 2, (1 - p) / 2]).astype(complex))
    return functools.reduce(np.kron, factors)


# ---------------------------------------------------------------------------
# State/operator validation used by tests and assembly code
# ---------------------------------------------------------------------------

def assert_hermitian(m: np.ndarray, atol: float = 1e-12) -> None:
    dev = max_abs(m - m.conj().T)
    if dev > atol:
        raise ContractViolationError(f"not Hermitian: max |M - M^dag| = {dev:.3e}")


def assert_density_matrix(m: np.ndarray, atol_herm: float = 1e-12,
                          atol_trace: float = 1e-10, atol_psd: float = 1e-10) -> None:
    """Hermitian within 1e-12, trace 1 within 1e-10, min eigenvalue >= -1e-10."""
    assert_hermitian(m, atol_herm)
    trace = np.trace(m).real
    if abs(trace - 1) > atol_trace:
        raise ContractViolationError(f"trace {trace} deviates from 1 beyond {atol_trace:.1e}")
    lowest = hermitian_eigenvalues(m)[0]
    if lowest < -atol_psd:
        raise ContractViolationError(f"min eigenvalue {lowest:.3e} < -{atol_psd:.1e}")


def assert_unitary(u: np.ndarray, atol: float = 1e-10) -> None:
    dev = max_abs(u @ u.conj().T - np.eye(u.shape[0]))
    if dev > atol:
        raise ContractViolationError(f"not unitary: max |U U^dag - I| = {dev:.3e}")


def complex_matrix_to_csv(m: np.ndarray, path) -> None:
    """Row-major dump with each cell written as a re,im pair."""
    m = np.asarray(m, dtype=complex)
    lines = []
    for row in m:
        lines.append(",".join(f"{c.real:.12g},{c.imag:.12g}" for c in row))
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def complex_matrix_from_csv(path) -> np.ndarray:
    rows = []
    with open(path) as fh:
        for line in fh:
            values = [float(cell) for cell in line.strip().split(",")]
            rows.append([complex(re, im) for re, im in zip(values[::2], values[1::2])])
    return np.array(rows, dtype=complex)
