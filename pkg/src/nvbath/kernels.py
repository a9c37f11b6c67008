"""Dense Hermitian numerical kernels used by every other module.

All matrix functions go through spectral decomposition: inputs are Hermitian
by construction, so this keeps propagators exactly unitary up to kernel
tolerance with a single code path.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import ContractViolationError

# Eigenvalues of a nominally-PSD matrix in [PSD_CLAMP, 0) are treated as
# roundoff and clamped to zero; anything below PSD_ERROR is a real violation.
PSD_CLAMP = -1e-10
PSD_ERROR = -1e-8

HERMITIAN_ATOL = 1e-10


class EigenDecomposition(NamedTuple):
    eigenvalues: np.ndarray    # real, ascending
    eigenvectors: np.ndarray   # unitary, columns


def max_abs(m: np.ndarray) -> float:
    """Entrywise max-modulus norm."""
    return float(np.max(np.abs(m))) if m.size else 0.0


def _require_hermitian(m: np.ndarray, atol: float) -> np.ndarray:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ContractViolationError(f"expected a square matrix, got shape {m.shape}")
    dev = max_abs(m - m.conj().T)
    if dev > atol:
        raise ContractViolationError(
            f"matrix is not Hermitian: max |M - M^dag| = {dev:.3e} > {atol:.1e}"
        )
    # Feed LAPACK an exactly Hermitian matrix regardless of roundoff.
    return (m + m.conj().T) / 2


def eigh(m: np.ndarray, atol: float = HERMITIAN_ATOL) -> EigenDecomposition:
    """Full spectral decomposition of a Hermitian matrix.

    Eigenvalues come out real and ascending; eigenvectors are the columns of
    a unitary matrix.  Raises ContractViolationError for input whose
    anti-Hermitian part exceeds ``atol``.
    """
    m = _require_hermitian(m, atol)
    eigenvalues, eigenvectors = np.linalg.eigh(m)
    return EigenDecomposition(eigenvalues, eigenvectors)


def hermitian_eigenvalues(m: np.ndarray, atol: float = HERMITIAN_ATOL) -> np.ndarray:
    """Eigenvalues only; cheaper than :func:`eigh` in hot loops."""
    return np.linalg.eigvalsh(_require_hermitian(m, atol))


def expm_unitary(h: np.ndarray, t: float) -> np.ndarray:
    """exp(-i h t) for Hermitian ``h`` via its spectral decomposition.

    With h in angular MHz and t in microseconds the exponent is
    dimensionless.  The result is unitary to kernel tolerance.
    """
    eigenvalues, vectors = eigh(h)
    phases = np.exp(-1j * eigenvalues * t)
    return (vectors * phases) @ vectors.conj().T


def _clamp_psd(eigenvalues: np.ndarray, noise_floor: float) -> np.ndarray:
    if eigenvalues[0] < PSD_ERROR:
        raise ContractViolationError(
            f"matrix is not PSD: min eigenvalue {eigenvalues[0]:.3e} < {PSD_ERROR:.1e}"
        )
    clipped = np.clip(eigenvalues, 0.0, None)
    if noise_floor > 0.0 and clipped[-1] > 0.0:
        clipped[clipped < noise_floor * clipped[-1]] = 0.0
    return clipped


def psd_eigenvalues(m: np.ndarray, noise_floor: float = 0.0) -> np.ndarray:
    """Clamped ascending eigenvalues of a nominally-PSD Hermitian matrix.

    Same clamp policy as :func:`sqrtm_psd`, without building the root matrix.
    """
    return _clamp_psd(hermitian_eigenvalues(m), noise_floor)


def sqrtm_psd(m: np.ndarray, noise_floor: float = 0.0) -> np.ndarray:
    """Principal square root of a PSD (density) matrix.

    Eigenvalues in [PSD_CLAMP, 0) are clamped to zero before the root;
    below PSD_ERROR the input is rejected as not a state.  ``noise_floor``
    optionally zeroes eigenvalues below ``noise_floor * max(eigenvalue)``:
    eigensolver noise on rank-deficient states otherwise surfaces as
    spurious sqrt(eps)-sized contributions.
    """
    eigenvalues, vectors = eigh(m)
    clipped = _clamp_psd(eigenvalues, noise_floor)
    return (vectors * np.sqrt(clipped)) @ vectors.conj().T


def partial_transpose_qubit(sigma: np.ndarray, bath_dim: int) -> np.ndarray:
    """Partial transpose over the qubit of a (2*bath_dim)-dim joint matrix.

    The matrix is read as 2x2 blocks of bath_dim x bath_dim; the two
    off-diagonal blocks swap while the diagonal blocks stay put.  Exact
    entry permutation: trace and Hermiticity are preserved.
    """
    sigma = np.asarray(sigma)
    if sigma.shape != (2 * bath_dim, 2 * bath_dim):
        raise ValueError(
            f"expected shape {(2 * bath_dim, 2 * bath_dim)}, got {sigma.shape}"
        )
    out = sigma.copy()
    out[:bath_dim, bath_dim:] = sigma[bath_dim:, :bath_dim]
    out[bath_dim:, :bath_dim] = sigma[:bath_dim, bath_dim:]
    return out


def central_difference(series: np.ndarray, dt: float) -> np.ndarray:
    """Second-order central differences; one-sided first-order at the ends."""
    series = np.asarray(series, dtype=float)
    if series.ndim != 1 or series.size < 3:
        raise ValueError("need a 1-d series of length >= 3")
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    out = np.empty_like(series)
    out[1:-1] = (series[2:] - series[:-2]) / (2 * dt)
    out[0] = (series[1] - series[0]) / dt
    out[-1] = (series[-1] - series[-2]) / dt
    return out
