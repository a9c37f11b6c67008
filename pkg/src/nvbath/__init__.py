"""Exact joint dynamics of an NV-center spin qubit dephasing in a small
13C nuclear spin bath, tracking qubit-environment negativity alongside the
fidelity between conditional bath states."""

from ._version import __version__
from .bath import (
    BathConfig,
    EnvironmentModel,
    NuclearSpin,
    PhysicalConstants,
    compute_coupling,
    diamond_lattice_sites,
    environment_to_csv,
    generate_bath,
    set_uniform_polarization,
)
from .errors import ConfigurationError, ContractViolationError
from .evolution import (
    ConditionalEvolution,
    ConditionalPropagators,
    JointState,
    QubitAmplitudes,
    QubitChoice,
    coherence,
    conditional_propagators,
    conditional_state,
    joint_state,
)
from .kernels import (
    central_difference,
    eigh,
    expm_unitary,
    partial_transpose_qubit,
    sqrtm_psd,
)
from .metrics import (
    MetricPoint,
    MetricSeries,
    commutator_witness,
    derivative_sign_agreement,
    fidelity,
    metric_series,
    negativity,
    pure_bath_overlap_metrics,
    separability_check,
)
from .operators import (
    build_bath_hamiltonian,
    build_coupling_operator,
    initial_bath_state,
    spin_operator,
)
from .scenario import (
    ScenarioConfig,
    ScenarioRun,
    paper_figures,
    run_scenario,
    summarize_run,
    validate_config,
)

__all__ = [
    "__version__",
    "BathConfig",
    "ConditionalEvolution",
    "ConditionalPropagators",
    "ConfigurationError",
    "ContractViolationError",
    "EnvironmentModel",
    "JointState",
    "MetricPoint",
    "MetricSeries",
    "NuclearSpin",
    "PhysicalConstants",
    "QubitAmplitudes",
    "QubitChoice",
    "ScenarioConfig",
    "ScenarioRun",
    "build_bath_hamiltonian",
    "build_coupling_operator",
    "central_difference",
    "coherence",
    "commutator_witness",
    "compute_coupling",
    "conditional_propagators",
    "conditional_state",
    "derivative_sign_agreement",
    "diamond_lattice_sites",
    "eigh",
    "environment_to_csv",
    "expm_unitary",
    "fidelity",
    "generate_bath",
    "initial_bath_state",
    "joint_state",
    "metric_series",
    "negativity",
    "paper_figures",
    "partial_transpose_qubit",
    "pure_bath_overlap_metrics",
    "run_scenario",
    "separability_check",
    "set_uniform_polarization",
    "spin_operator",
    "sqrtm_psd",
    "summarize_run",
    "validate_config",
]
