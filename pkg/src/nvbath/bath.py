"""Nuclear bath geometry on the diamond lattice and secular hyperfine couplings.

Conventions used throughout the package: positions in angstrom, coupling
constants in MHz (plain frequency, not angular), magnetic field in tesla.
The qubit sits at the origin and its symmetry axis defines z.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

import numpy as np
import yaml

from .errors import ConfigurationError

# Planck constant, J*s (exact SI value).
PLANCK_H = 6.62607015e-34

# Hard cap on bath size: dense kernels stop being sensible past joint dim 2048.
MAX_BATH_SPINS = 10

COUPLING_FORMS = ("standard", "paper_literal")


@dataclass(frozen=True)
class PhysicalConstants:
    """Physical constants of the qubit/bath system.

    ``delta_zfs_ghz`` is carried for documentation only: the zero-field
    splitting commutes with everything else and never enters a propagator.
    """

    delta_zfs_ghz: float = 2.87
    gamma_e_ghz_per_t: float = 28.08
    gamma_n_mhz_per_t: float = 10.71
    mu0_over_4pi: float = 1e-7
    lattice_constant_angstrom: float = 3.567

    def __post_init__(self):
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            if not (value > 0 and np.isfinite(value)):
                raise ConfigurationError(
                    f"PhysicalConstants.{f.name} must be strictly positive, got {value!r}"
                )


@dataclass(frozen=True)
class NuclearSpin:
    """A single spin-1/2 nucleus: position relative to the qubit, its
    hyperfine coupling vector (A^zx, A^zy, A^zz) and polarization."""

    position: np.ndarray        # (3,) angstrom
    coupling: np.ndarray        # (3,) MHz
    polarization: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "position", np.asarray(self.position, dtype=float))
        object.__setattr__(self, "coupling", np.asarray(self.coupling, dtype=float))
        if self.position.shape != (3,) or self.coupling.shape != (3,):
            raise ValueError("position and coupling must be 3-vectors")
        if not np.linalg.norm(self.position) > 0:
            raise ValueError("nucleus cannot sit at the qubit origin")
        if not np.all(np.isfinite(self.coupling)):
            raise ValueError("coupling must be finite")
        if abs(self.polarization) > 1:
            raise ValueError(f"polarization must lie in [-1, 1], got {self.polarization}")


@dataclass(frozen=True)
class EnvironmentModel:
    """Bath of K spin-1/2 nuclei in a field B_z; bath Hilbert dim is 2**K."""

    nuclei: tuple[NuclearSpin, ...]
    b_z: float = 0.0
    constants: PhysicalConstants = field(default_factory=PhysicalConstants)
    coupling_form: str = "standard"

    def __post_init__(self):
        object.__setattr__(self, "nuclei", tuple(self.nuclei))
        if not self.nuclei:
            raise ConfigurationError("environment needs at least one nucleus")
        if len(self.nuclei) > MAX_BATH_SPINS:
            raise ConfigurationError(
                f"bath size {len(self.nuclei)} exceeds the cap of {MAX_BATH_SPINS} spins"
            )
        positions = {tuple(n.position) for n in self.nuclei}
        if len(positions) != len(self.nuclei):
            raise ConfigurationError("nucleus positions must be pairwise distinct")
        if self.coupling_form not in COUPLING_FORMS:
            raise ConfigurationError(f"unknown coupling_form {self.coupling_form!r}")

    @property
    def size(self) -> int:
        return len(self.nuclei)

    @property
    def dim(self) -> int:
        """Bath Hilbert space dimension."""
        return 2 ** len(self.nuclei)

    @property
    def polarizations(self) -> np.ndarray:
        return np.array([n.polarization for n in self.nuclei])


def compute_coupling(position, constants: PhysicalConstants, form: str = "standard") -> np.ndarray:
    """Secular dipolar hyperfine vector (A^zx, A^zy, A^zz) in MHz.

    ``standard`` uses the secular dipolar tensor
    ``A_zj = C/r^3 (delta_zj - 3 (r.j)(r.z)/r^2)``; ``paper_literal`` replaces
    delta_zj by 1 for every j.  C/r^3 is the dipolar frequency prefactor
    ``(mu0/4pi) h gamma_e gamma_n / r^3`` expressed in MHz.
    """
    position = np.asarray(position, dtype=float)
    if position.shape != (3,):
        raise ValueError("position must be a 3-vector")
    r = np.linalg.norm(position)
    if not r > 0:
        raise ValueError("cannot compute a coupling for zero displacement")
    if form not in COUPLING_FORMS:
        raise ConfigurationError(f"unknown coupling form {form!r}")

    r_m = r * 1e-10
    prefactor_mhz = (
        constants.mu0_over_4pi
        * PLANCK_H
        * (constants.gamma_e_ghz_per_t * 1e9)
        * (constants.gamma_n_mhz_per_t * 1e6)
        / r_m**3
        / 1e6
    )
    anisotropy = 3.0 * position * position[2] / r**2
    isotropic = np.array([0.0, 0.0, 1.0]) if form == "standard" else np.ones(3)
    return prefactor_mhz * (isotropic - anisotropy)


def diamond_lattice_sites(r_min: float, r_max: float, lattice_constant: float) -> np.ndarray:
    """All diamond-lattice sites with r_min <= |r| <= r_max, qubit at the origin.

    Diamond is FCC with a two-atom basis at (0,0,0) and a0/4 (1,1,1).  Sites
    are returned lexicographically sorted so downstream sampling is stable.
    """
    if not (0 < r_min < r_max):
        raise ConfigurationError(f"need 0 < r_min < r_max, got ({r_min}, {r_max})")
    a0 = lattice_constant
    reach = int(np.ceil(r_max / a0)) + 1
    cells = np.arange(-reach, reach + 1)
    fcc = np.array([[0, 0, 0], [0, 0.5, 0.5], [0.5, 0, 0.5], [0.5, 0.5, 0]])
    basis = np.array([[0, 0, 0], [0.25, 0.25, 0.25]])

    grid = np.stack(np.meshgrid(cells, cells, cells, indexing="ij"), axis=-1).reshape(-1, 3)
    sites = (grid[:, None, None, :] + fcc[None, :, None, :] + basis[None, None, :, :])
    sites = a0 * sites.reshape(-1, 3)
    radii = np.linalg.norm(sites, axis=1)
    sites = sites[(radii >= r_min) & (radii <= r_max)]
    order = np.lexsort((sites[:, 2], sites[:, 1], sites[:, 0]))
    return sites[order]


def generate_bath(
    seed: int,
    count: int,
    r_min: float = 2.5,
    r_max: float = 8.0,
    constants: PhysicalConstants | None = None,
    b_z: float = 0.0,
    coupling_form: str = "standard",
) -> EnvironmentModel:
    """Sample ``count`` distinct lattice sites uniformly from the spherical
    shell [r_min, r_max] and attach their hyperfine couplings.

    Deterministic for a fixed seed (PCG64 stream).  All nuclei start
    unpolarized; see :func:`set_uniform_polarization`.
    """
    if count < 1:
        raise ConfigurationError(f"count must be >= 1, got {count}")
    if count > MAX_BATH_SPINS:
        raise ConfigurationError(f"count {count} exceeds the cap of {MAX_BATH_SPINS} spins")
    constants = constants or PhysicalConstants()

    sites = diamond_lattice_sites(r_min, r_max, constants.lattice_constant_angstrom)
    if len(sites) < count:
        raise ConfigurationError(
            f"shell [{r_min}, {r_max}] angstrom holds {len(sites)} lattice sites, "
            f"fewer than the {count} requested"
        )
    rng = np.random.default_rng(seed)
    chosen = sites[rng.choice(len(sites), size=count, replace=False)]
    nuclei = tuple(
        NuclearSpin(position=pos, coupling=compute_coupling(pos, constants, coupling_form))
        for pos in chosen
    )
    return EnvironmentModel(nuclei=nuclei, b_z=b_z, constants=constants, coupling_form=coupling_form)


def set_uniform_polarization(env: EnvironmentModel, p: float) -> EnvironmentModel:
    """Return a copy of ``env`` with every nucleus polarized to ``p``."""
    if abs(p) > 1:
        raise ValueError(f"polarization must lie in [-1, 1], got {p}")
    nuclei = tuple(dataclasses.replace(n, polarization=float(p)) for n in env.nuclei)
    return dataclasses.replace(env, nuclei=nuclei)


def environment_to_csv(env: EnvironmentModel, path) -> None:
    """Dump positions and couplings, one nucleus per row."""
    lines = ["index,x_A,y_A,z_A,Azx_MHz,Azy_MHz,Azz_MHz"]
    for i, n in enumerate(env.nuclei):
        cells = [f"{v:.12g}" for v in (*n.position, *n.coupling)]
        lines.append(",".join([str(i), *cells]))
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# Bath configuration files
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BathConfig:
    """Everything needed to rebuild one environment realization."""

    seed: int = 7
    count: int = 5
    r_min: float = 2.5
    r_max: float = 8.0
    b_z: float = 0.0
    p: float = 0.0
    coupling_form: str = "standard"
    constants: PhysicalConstants = field(default_factory=PhysicalConstants)

    def build(self) -> EnvironmentModel:
        env = generate_bath(
            self.seed, self.count, self.r_min, self.r_max,
            constants=self.constants, b_z=self.b_z, coupling_form=self.coupling_form,
        )
        return set_uniform_polarization(env, self.p)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "count": self.count,
            "r_min": self.r_min,
            "r_max": self.r_max,
            "b_z": self.b_z,
            "p": self.p,
            "coupling_form": self.coupling_form,
            "constants": dataclasses.asdict(self.constants),
        }

    @classmethod
    def from_dict(cls, mapping: dict) -> "BathConfig":
        mapping = dict(mapping)
        constants = PhysicalConstants(**mapping.pop("constants", {}))
        unknown = set(mapping) - {f.name for f in dataclasses.fields(cls)}
        if unknown:
            raise ConfigurationError(f"unknown bath config keys: {sorted(unknown)}")
        return cls(constants=constants, **mapping)


def save_bath_config(config: BathConfig, path) -> None:
    with open(path, "w", newline="\n") as fh:
        yaml.safe_dump(config.to_dict(), fh, sort_keys=True)


def load_bath_config(path) -> BathConfig:
    with open(path) as fh:
        raw = yaml.safe_load(fh) or {}
    if not isinstance(raw, dict):
        raise ConfigurationError(f"bath config {path} is not a key-value mapping")
    return BathConfig.from_dict(raw)
