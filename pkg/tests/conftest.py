import dataclasses

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

import nvbath as nb

settings.register_profile(
    "default",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

PROTOCOL_SEEDS = tuple(range(1, 11))
PROTOCOL_FIELDS = (0.0, 0.2)
PROTOCOL_POLARIZATIONS = (0.0, 0.1, 0.4, 0.7, 1.0)


def random_density_matrix(rng, dim):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    m = a @ a.conj().T
    return m / np.trace(m).real


def random_hermitian(rng, dim):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (a + a.conj().T) / 2


def random_unitary(rng, dim):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(a)
    return q * (np.diag(r) / np.abs(np.diag(r)))


@pytest.fixture(scope="session")
def default_grid():
    return np.linspace(0.0, 50.0, 501)


@pytest.fixture(scope="session")
def protocol_sweep(default_grid):
    """All metric series for seeds 1..10 x both qubits x both fields x
    p in {0, 0.1, 0.4, 0.7, 1} on the default grid.  Shared by the
    acceptance criteria; takes over a minute to build."""
    sweep = {}
    for seed in PROTOCOL_SEEDS:
        geometry = nb.generate_bath(seed=seed, count=5)
        for b_z in PROTOCOL_FIELDS:
            env_b = dataclasses.replace(geometry, b_z=b_z)
            for qubit in nb.QubitChoice:
                evolution = nb.ConditionalEvolution(env_b, qubit)
                for p in PROTOCOL_POLARIZATIONS:
                    env = nb.set_uniform_polarization(env_b, p)
                    series = nb.metric_series(
                        env,
                        qubit,
                        nb.QubitAmplitudes.equal_superposition(),
                        default_grid,
                        evolution=evolution,
                    )
                    sweep[(seed, qubit.value, b_z, p)] = series
    return sweep


@pytest.fixture(scope="session")
def preset_run(tmp_path_factory):
    """One paper-figures preset run (16 series, seed 7) shared across tests."""
    outdir = tmp_path_factory.mktemp("preset")
    run, summary = nb.paper_figures(outdir, seed=7)
    return run, summary, outdir
