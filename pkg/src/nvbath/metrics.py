"""Entanglement negativity, conditional-state fidelity and the time series
combining them.

Negativity is the absolute sum of negative eigenvalues after partial
transposition over the qubit.  Fidelity is the Uhlmann fidelity between the
two bath states conditional on the qubit pointer states; the series reports
one minus fidelity, which vanishes exactly when the evolution generates no
qubit-environment entanglement.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from threadpoolctl import threadpool_limits

from .bath import EnvironmentModel
from .errors import ConfigurationError, ContractViolationError
from .evolution import (
    ConditionalEvolution,
    ConditionalPropagators,
    JointState,
    QubitAmplitudes,
    QubitChoice,
    coherence,
    conditional_state,
    joint_state,
)
from .kernels import (
    central_difference,
    hermitian_eigenvalues,
    max_abs,
    partial_transpose_qubit,
    psd_eigenvalues,
    sqrtm_psd,
)
from .operators import initial_bath_state

# Eigenvalues of the partial transpose below this modulus count as zero:
# they sit under the eigensolver noise floor for the matrix sizes used here.
NEGATIVE_EIGENVALUE_CUTOFF = 1e-12

# Relative floor applied to eigenvalues inside the fidelity square roots.
# Rank-deficient conditional states (fully polarized baths) otherwise leak
# sqrt(machine-eps) artifacts into Tr sqrt(.), visible at the 1e-7 level.
FIDELITY_NOISE_FLOOR = 1e-12

# Allowed roundoff overshoot before fidelity is clamped into [0, 1].
FIDELITY_ROUNDOFF = 1e-9


def negativity(sigma: JointState) -> float:
    """Absolute sum of the negative eigenvalues of the partial transpose."""
    transposed = partial_transpose_qubit(sigma.matrix, sigma.bath_dim)
    eigenvalues = hermitian_eigenvalues(transposed)
    negatives = eigenvalues[eigenvalues < -NEGATIVE_EIGENVALUE_CUTOFF]
    return float(np.abs(negatives).sum())


def fidelity(r_nn: np.ndarray, r_11: np.ndarray) -> float:
    """Uhlmann fidelity [Tr sqrt(sqrt(R_nn) R_11 sqrt(R_nn))]^2.

    Both inputs must be density matrices of the same dimension.  The result
    is clamped into [0, 1]; an overshoot beyond the roundoff allowance is
    reported as a contract violation.
    """
    if r_nn.shape != r_11.shape:
        raise ValueError(f"dimension mismatch: {r_nn.shape} vs {r_11.shape}")
    root = sqrtm_psd(r_nn, noise_floor=FIDELITY_NOISE_FLOOR)
    inner = root @ r_11 @ root
    inner = (inner + inner.conj().T) / 2
    eigenvalues = psd_eigenvalues(inner, noise_floor=FIDELITY_NOISE_FLOOR)
    value = float(np.sum(np.sqrt(eigenvalues)) ** 2)
    if value > 1 + FIDELITY_ROUNDOFF:
        raise ContractViolationError(f"fidelity {value} exceeds 1 beyond roundoff")
    return min(max(value, 0.0), 1.0)


def separability_check(r_nn: np.ndarray, r_11: np.ndarray, eps: float = 1e-10) -> bool:
    """True iff the two conditional bath states agree entrywise within eps."""
    if r_nn.shape != r_11.shape:
        raise ValueError(f"dimension mismatch: {r_nn.shape} vs {r_11.shape}")
    return max_abs(r_nn - r_11) < eps


def commutator_witness(props: ConditionalPropagators) -> float:
    """Max-modulus norm of [w_n(t), w_1(t)].

    Nonzero commutator is the precondition for detecting the entanglement
    through operations on the qubit alone; it vanishes identically at zero
    field.
    """
    return max_abs(props.w_n @ props.w_1 - props.w_1 @ props.w_n)


def pure_bath_overlap_metrics(props: ConditionalPropagators, bath_ket: np.ndarray,
                              amps: QubitAmplitudes) -> tuple[float, float]:
    """(negativity, fidelity) for an initially pure bath, via state overlaps.

    For a pure bath the joint state stays pure and both metrics reduce to
    the overlap of the two conditionally evolved bath kets: F = |<E_n|E_1>|^2
    and N = |a||b| sqrt(1 - F).  Independent of the density-matrix pipeline;
    used as a cross-check.
    """
    e_n = props.w_n @ bath_ket
    e_1 = props.w_1 @ bath_ket
    overlap_sq = abs(np.vdot(e_n, e_1)) ** 2
    neg = abs(amps.a) * abs(amps.b) * np.sqrt(max(1.0 - overlap_sq, 0.0))
    return float(neg), float(overlap_sq)


@dataclass(frozen=True)
class MetricPoint:
    t: float
    negativity: float
    one_minus_fidelity: float
    coherence_mod: float
    commutator_norm: float


@dataclass(frozen=True)
class MetricSeries:
    """Per-time-point metrics plus the numerical derivatives of the two
    headline quantities."""

    t_us: np.ndarray
    negativity: np.ndarray
    one_minus_fidelity: np.ndarray
    coherence_mod: np.ndarray
    commutator_norm: np.ndarray
    d_negativity_dt: np.ndarray
    d_one_minus_fidelity_dt: np.ndarray

    def __len__(self) -> int:
        return len(self.t_us)

    @property
    def points(self) -> list[MetricPoint]:
        return [
            MetricPoint(
                t=float(self.t_us[i]),
                negativity=float(self.negativity[i]),
                one_minus_fidelity=float(self.one_minus_fidelity[i]),
                coherence_mod=float(self.coherence_mod[i]),
                commutator_norm=float(self.commutator_norm[i]),
            )
            for i in range(len(self))
        ]


def _validate_grid(grid: np.ndarray) -> float:
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 3:
        raise ConfigurationError("time grid needs at least 3 points")
    steps = np.diff(grid)
    if np.any(steps <= 0):
        raise ConfigurationError("time grid must be strictly increasing")
    dt = steps[0]
    if np.max(np.abs(steps - dt)) > 1e-9 * dt:
        raise ConfigurationError("time grid must be uniformly spaced")
    return float(dt)


def metric_series(
    env: EnvironmentModel,
    qubit: QubitChoice,
    amps: QubitAmplitudes,
    grid: np.ndarray,
    evolution: ConditionalEvolution | None = None,
) -> MetricSeries:
    """Evaluate all metrics over a uniform time grid.

    ``evolution`` may pass a pre-built :class:`ConditionalEvolution` for the
    same (env, qubit) pair to share its cached eigendecompositions.
    """
    grid = np.asarray(grid, dtype=float)
    dt = _validate_grid(grid)
    evo = evolution if evolution is not None else ConditionalEvolution(env, qubit)
    r0 = initial_bath_state(env)

    n_points = grid.size
    neg = np.empty(n_points)
    omf = np.empty(n_points)
    coh = np.empty(n_points)
    comm = np.empty(n_points)
    # BLAS threading loses badly on dim <= 64 eigensolves; pin to one thread.
    with threadpool_limits(limits=1):
        for i, t in enumerate(grid):
            props = evo.propagators(t)
            r_nn = conditional_state(props, r0, "n", "n")
            r_11 = conditional_state(props, r0, "1", "1")
            sigma = joint_state(props, r0, amps)
            neg[i] = negativity(sigma)
            omf[i] = 1.0 - fidelity(r_nn, r_11)
            coh[i] = min(abs(coherence(props, r0)), 1.0)
            comm[i] = commutator_witness(props)

    return MetricSeries(
        t_us=grid,
        negativity=neg,
        one_minus_fidelity=omf,
        coherence_mod=coh,
        commutator_norm=comm,
        d_negativity_dt=central_difference(neg, dt),
        d_one_minus_fidelity_dt=central_difference(omf, dt),
    )


def derivative_sign_agreement(series: MetricSeries, threshold: float = 1e-4) -> float:
    """Fraction of grid points where dN/dt and d(1-F)/dt share a sign.

    Only points where both derivative magnitudes exceed ``threshold``
    (per us) count; this masks the zero crossings where the sign is not
    meaningful.  Returns 1.0 when no point is active.
    """
    dn = series.d_negativity_dt
    df = series.d_one_minus_fidelity_dt
    active = (np.abs(dn) > threshold) & (np.abs(df) > threshold)
    if not np.any(active):
        return 1.0
    agree = np.sign(dn[active]) == np.sign(df[active])
    return float(np.mean(agree))


def ratio_statistics(series: MetricSeries, floor: float = 1e-8) -> dict | None:
    """Summary of the pointwise ratio N / (1 - F) where 1 - F is resolvable.

    Reported for inspection only; no fixed proportionality constant is
    asserted anywhere.
    """
    mask = series.one_minus_fidelity > floor
    if not np.any(mask):
        return None
    ratio = series.negativity[mask] / series.one_minus_fidelity[mask]
    return {
        "points": int(mask.sum()),
        "median": float(np.median(ratio)),
        "mean": float(np.mean(ratio)),
        "min": float(np.min(ratio)),
        "max": float(np.max(ratio)),
    }
