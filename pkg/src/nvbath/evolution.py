"""Conditional propagators, conditional bath states and the joint state.

Only the chosen two-level subspace of the NV qutrit is ever represented:
the interaction cannot drive transitions between pointer states, and the
qutrit's free phase factors out.  Pointer state m = 1 always couples with
+V; its partner couples with sign_n * V (0 for the 0/1 qubit, -1 for the
-1/1 qubit).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .bath import EnvironmentModel
from .kernels import EigenDecomposition, eigh
from .operators import build_bath_hamiltonian, build_coupling_operator


class QubitChoice(enum.Enum):
    """Which two qutrit levels form the qubit."""

    ZERO_ONE = "01"
    MINUS_ONE_ONE = "-11"

    @property
    def sign_n(self) -> int:
        """Coefficient of V for the lower pointer state (m=1 is fixed at +1)."""
        return 0 if self is QubitChoice.ZERO_ONE else -1

    @property
    def n_index(self) -> int:
        """m-value of the lower pointer state."""
        return 0 if self is QubitChoice.ZERO_ONE else -1

    @classmethod
    def from_label(cls, label) -> "QubitChoice":
        text = str(label).strip()
        if text in ("01", "1", "0-1", "zero_one"):
            return cls.ZERO_ONE
        if text in ("-11", "m11", "-1_1", "minus_one_one"):
            return cls.MINUS_ONE_ONE
        raise ValueError(f"unknown qubit label {label!r}; use '01' or '-11'")


@dataclass(frozen=True)
class QubitAmplitudes:
    """Initial qubit superposition a|n> + b|1>, normalized."""

    a: complex
    b: complex

    def __post_init__(self):
        norm_sq = abs(self.a) ** 2 + abs(self.b) ** 2
        if abs(norm_sq - 1) > 1e-12:
            raise ValueError(f"|a|^2 + |b|^2 = {norm_sq} is not 1")

    @classmethod
    def equal_superposition(cls) -> "QubitAmplitudes":
        return cls(1 / np.sqrt(2), 1 / np.sqrt(2))

    @classmethod
    def normalized(cls, a: complex, b: complex) -> "QubitAmplitudes":
        norm = np.sqrt(abs(a) ** 2 + abs(b) ** 2)
        if norm == 0:
            raise ValueError("amplitudes cannot both be zero")
        return cls(a / norm, b / norm)


@dataclass(frozen=True)
class ConditionalPropagators:
    """The pair of bath unitaries (w_n(t), w_1(t)) at one time."""

    w_n: np.ndarray
    w_1: np.ndarray
    t: float


@dataclass(frozen=True)
class JointState:
    """Joint qubit-environment density matrix with its block size."""

    matrix: np.ndarray
    bath_dim: int


class ConditionalEvolution:
    """Cached spectral decompositions of H_E + sign_n V and H_E + V.

    Diagonalizing once per (environment, qubit) pair makes every time point
    an O(dim^2) phase rotation instead of an O(dim^3) eigensolve.
    """

    def __init__(self, env: EnvironmentModel, qubit: QubitChoice):
        self.env = env
        self.qubit = qubit
        h_e = build_bath_hamiltonian(env)
        v = build_coupling_operator(env)
        self._eig_n: EigenDecomposition = eigh(h_e + qubit.sign_n * v)
        self._eig_1: EigenDecomposition = eigh(h_e + v)

    @staticmethod
    def _propagator(eig: EigenDecomposition, t: float) -> np.ndarray:
        if t == 0.0:  # exactly the identity, not V V^dag with its roundoff
            return np.eye(len(eig.eigenvalues), dtype=complex)
        phases = np.exp(-1j * eig.eigenvalues * t)
        return (eig.eigenvectors * phases) @ eig.eigenvectors.conj().T

    def propagators(self, t: float) -> ConditionalPropagators:
        if t < 0:
            raise ValueError(f"time must be non-negative, got {t}")
        return ConditionalPropagators(
            w_n=self._propagator(self._eig_n, t),
            w_1=self._propagator(self._eig_1, t),
            t=t,
        )


def conditional_propagators(env: EnvironmentModel, qubit: QubitChoice, t: float) -> ConditionalPropagators:
    """w_n = exp(-i (H_E + sign_n V) t), w_1 = exp(-i (H_E + V) t)."""
    return ConditionalEvolution(env, qubit).propagators(t)


def conditional_state(props: ConditionalPropagators, r0: np.ndarray, i: str, j: str) -> np.ndarray:
    """R_ij(t) = w_i(t) R(0) w_j(t)^dag with i, j drawn from {'n', '1'}."""
    lookup = {"n": props.w_n, "1": props.w_1}
    try:
        w_i, w_j = lookup[i], lookup[j]
    except KeyError as err:
        raise ValueError(f"pointer index must be 'n' or '1', got {err.args[0]!r}") from None
    if r0.shape != w_i.shape:
        raise ValueError(f"state shape {r0.shape} does not match propagator {w_i.shape}")
    return w_i @ r0 @ w_j.conj().T


def joint_state(props: ConditionalPropagators, r0: np.ndarray, amps: QubitAmplitudes) -> JointState:
    """Assemble the 2x2 block joint density matrix.

    Diagonal blocks |a|^2 R_nn and |b|^2 R_11; upper-right a b* R_n1 and its
    conjugate transpose below, which keeps the result exactly Hermitian.
    """
    d = r0.shape[0]
    r_nn = conditional_state(props, r0, "n", "n")
    r_11 = conditional_state(props, r0, "1", "1")
    r_n1 = conditional_state(props, r0, "n", "1")

    a, b = amps.a, amps.b
    sigma = np.empty((2 * d, 2 * d), dtype=complex)
    sigma[:d, :d] = abs(a) ** 2 * r_nn
    sigma[d:, d:] = abs(b) ** 2 * r_11
    upper = a * np.conj(b) * r_n1
    sigma[:d, d:] = upper
    sigma[d:, :d] = upper.conj().T
    sigma = (sigma + sigma.conj().T) / 2
    return JointState(matrix=sigma, bath_dim=d)


def coherence(props: ConditionalPropagators, r0: np.ndarray) -> complex:
    """Tr[w_n R(0) w_1^dag]; the qubit off-diagonal element is a b* times this."""
    return complex(np.vdot(props.w_1, props.w_n @ r0))
