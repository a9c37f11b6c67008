"""Seeded scenario execution: config parsing, CSV/JSON emission, presets.

A scenario generates one bath realization from its seed and sweeps every
requested (qubit, B_z, polarization) combination over the same geometry,
writing one CSV per combination plus a JSON manifest sufficient to re-run
the whole set bit-identically.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from ._version import __version__
from .bath import (
    COUPLING_FORMS,
    EnvironmentModel,
    PhysicalConstants,
    generate_bath,
    set_uniform_polarization,
)
from .errors import ConfigurationError
from .evolution import ConditionalEvolution, QubitAmplitudes, QubitChoice
from .metrics import MetricSeries, derivative_sign_agreement, metric_series, ratio_statistics

CSV_HEADER = (
    "t_us,negativity,one_minus_fidelity,coherence_mod,commutator_norm,"
    "d_negativity_dt,d_one_minus_fidelity_dt"
)

PRESET_POLARIZATIONS = (0.1, 0.4, 0.7, 1.0)
PRESET_FIELDS = (0.0, 0.2)


@dataclass(frozen=True)
class ScenarioConfig:
    seed: int = 7
    nucleus_count: int = 5
    qubits: tuple[QubitChoice, ...] = (QubitChoice.ZERO_ONE, QubitChoice.MINUS_ONE_ONE)
    b_fields: tuple[float, ...] = PRESET_FIELDS
    polarizations: tuple[float, ...] = PRESET_POLARIZATIONS
    t_max: float = 50.0
    n_steps: int = 501
    amplitudes: QubitAmplitudes = field(default_factory=QubitAmplitudes.equal_superposition)
    r_min: float = 2.5
    r_max: float = 8.0
    coupling_form: str = "standard"
    constants: PhysicalConstants = field(default_factory=PhysicalConstants)
    output_path: str = "out"

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(0.0, self.t_max, self.n_steps)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "nucleus_count": self.nucleus_count,
            "qubits": [q.value for q in self.qubits],
            "b_fields": list(self.b_fields),
            "polarizations": list(self.polarizations),
            "t_max": self.t_max,
            "n_steps": self.n_steps,
            "amplitude_a": [self.amplitudes.a.real, self.amplitudes.a.imag],
            "amplitude_b": [self.amplitudes.b.real, self.amplitudes.b.imag],
            "shell": [self.r_min, self.r_max],
            "coupling_form": self.coupling_form,
            "constants": dataclasses.asdict(self.constants),
            "output_path": self.output_path,
        }


def _as_list(value) -> list:
    return list(value) if isinstance(value, (list, tuple)) else [value]


def _parse_qubits(raw) -> tuple[QubitChoice, ...]:
    labels = []
    for item in _as_list(raw):
        if str(item).strip().lower() == "both":
            labels.extend([QubitChoice.ZERO_ONE, QubitChoice.MINUS_ONE_ONE])
        else:
            labels.append(QubitChoice.from_label(item))
    # de-duplicate, preserving order
    seen: list[QubitChoice] = []
    for q in labels:
        if q not in seen:
            seen.append(q)
    return tuple(seen)


def _parse_amplitude(value) -> complex:
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ConfigurationError("amplitudes given as a list must be [re, im]")
        return complex(float(value[0]), float(value[1]))
    return complex(float(value), 0.0)


def validate_config(raw) -> ScenarioConfig:
    """Parse config content (YAML/JSON text or a mapping) into a ScenarioConfig.

    Accepts a run manifest as well: its embedded ``config`` section is used.
    Unknown or out-of-range fields raise ConfigurationError naming the key.
    """
    if raw is None:
        mapping = {}
    elif isinstance(raw, dict):
        mapping = dict(raw)
    else:
        try:
            parsed = yaml.safe_load(raw)
        except yaml.YAMLError as err:
            raise ConfigurationError(f"config is not valid YAML/JSON: {err}") from err
        if parsed is None:
            parsed = {}
        if not isinstance(parsed, dict):
            raise ConfigurationError("config must be a key-value mapping")
        mapping = parsed
    if isinstance(mapping.get("config"), dict):  # run manifest
        mapping = dict(mapping["config"])

    defaults = ScenarioConfig()
    known = set(defaults.to_dict())
    unknown = set(mapping) - known
    if unknown:
        raise ConfigurationError(f"unknown config keys: {sorted(unknown)}")

    def take(key, fallback):
        return mapping.get(key, fallback)

    try:
        seed = int(take("seed", defaults.seed))
    except (TypeError, ValueError):
        raise ConfigurationError("seed must be an integer") from None

    nucleus_count = take("nucleus_count", defaults.nucleus_count)
    if not isinstance(nucleus_count, int) or not 1 <= nucleus_count <= 10:
        raise ConfigurationError(f"nucleus_count must be an integer in [1, 10], got {nucleus_count!r}")

    try:
        qubits = _parse_qubits(take("qubits", [q.value for q in defaults.qubits]))
    except ValueError as err:
        raise ConfigurationError(f"qubits: {err}") from None
    if not qubits:
        raise ConfigurationError("qubits must name at least one qubit")

    b_fields = tuple(float(b) for b in _as_list(take("b_fields", list(defaults.b_fields))))
    if not b_fields:
        raise ConfigurationError("b_fields must hold at least one field value")

    polarizations = tuple(float(p) for p in _as_list(take("polarizations", list(defaults.polarizations))))
    if not polarizations or any(abs(p) > 1 for p in polarizations):
        raise ConfigurationError(
            f"polarizations must be a non-empty list of values in [-1, 1], got {list(polarizations)}"
        )

    t_max = float(take("t_max", defaults.t_max))
    if not t_max > 0:
        raise ConfigurationError(f"t_max must be positive, got {t_max}")

    n_steps = take("n_steps", defaults.n_steps)
    if not isinstance(n_steps, int) or n_steps < 3:
        raise ConfigurationError(f"n_steps must be an integer >= 3, got {n_steps!r}")

    try:
        amp_a = _parse_amplitude(take("amplitude_a", [defaults.amplitudes.a.real, 0.0]))
        amp_b = _parse_amplitude(take("amplitude_b", [defaults.amplitudes.b.real, 0.0]))
        amplitudes = QubitAmplitudes.normalized(amp_a, amp_b)
    except (ValueError, ConfigurationError) as err:
        raise ConfigurationError(f"amplitude_a/amplitude_b: {err}") from None

    shell = _as_list(take("shell", [defaults.r_min, defaults.r_max]))
    if len(shell) != 2:
        raise ConfigurationError("shell must be [r_min, r_max]")
    r_min, r_max = float(shell[0]), float(shell[1])
    if not 0 < r_min < r_max:
        raise ConfigurationError(f"shell needs 0 < r_min < r_max, got [{r_min}, {r_max}]")

    coupling_form = str(take("coupling_form", defaults.coupling_form))
    if coupling_form == "paper":
        coupling_form = "paper_literal"
    if coupling_form not in COUPLING_FORMS:
        raise ConfigurationError(
            f"coupling_form must be one of {COUPLING_FORMS} (or 'paper'), got {coupling_form!r}"
        )

    constants_map = take("constants", {})
    if not isinstance(constants_map, dict):
        raise ConfigurationError("constants must be a mapping of field overrides")
    try:
        constants = PhysicalConstants(**constants_map)
    except TypeError as err:
        raise ConfigurationError(f"constants: {err}") from None

    output_path = str(take("output_path", defaults.output_path))

    return ScenarioConfig(
        seed=seed,
        nucleus_count=nucleus_count,
        qubits=qubits,
        b_fields=b_fields,
        polarizations=polarizations,
        t_max=t_max,
        n_steps=n_steps,
        amplitudes=amplitudes,
        r_min=r_min,
        r_max=r_max,
        coupling_form=coupling_form,
        constants=constants,
        output_path=output_path,
    )


def series_filename(qubit: QubitChoice, b_z: float, p: float) -> str:
    qlabel = "01" if qubit is QubitChoice.ZERO_ONE else "m11"
    return f"series_q{qlabel}_bz{b_z:g}_p{p:g}.csv"


def write_series_csv(series: MetricSeries, path) -> None:
    """Fixed schema, 12 significant digits, LF line endings."""
    columns = (
        series.t_us,
        series.negativity,
        series.one_minus_fidelity,
        series.coherence_mod,
        series.commutator_norm,
        series.d_negativity_dt,
        series.d_one_minus_fidelity_dt,
    )
    lines = [CSV_HEADER]
    for row in zip(*columns):
        lines.append(",".join(f"{value:.12g}" for value in row))
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


@dataclass(frozen=True)
class ScenarioRun:
    config: ScenarioConfig
    environment: EnvironmentModel
    series: dict[tuple[str, float, float], MetricSeries]
    csv_paths: list[Path]
    manifest_path: Path
    manifest: dict


def _build_manifest(config: ScenarioConfig, env: EnvironmentModel, outputs: list[str]) -> dict:
    return {
        "format": "nvbath-manifest-v1",
        "version": __version__,
        "rng": "numpy.random.default_rng (PCG64)",
        "config": config.to_dict(),
        "environment": {
            "positions_angstrom": [list(n.position) for n in env.nuclei],
            "couplings_mhz": [list(n.coupling) for n in env.nuclei],
            "coupling_form": env.coupling_form,
            "constants": dataclasses.asdict(env.constants),
        },
        "outputs": outputs,
    }


def run_scenario(config: ScenarioConfig) -> ScenarioRun:
    """Run every (qubit, B_z, p) combination over one seeded bath realization.

    Writes one CSV per combination and a manifest; deterministic down to the
    output bytes for a fixed config.
    """
    outdir = Path(config.output_path)
    try:
        outdir.mkdir(parents=True, exist_ok=True)
    except OSError as err:
        raise OSError(f"cannot create output directory {outdir}: {err}") from err

    geometry = generate_bath(
        config.seed,
        config.nucleus_count,
        config.r_min,
        config.r_max,
        constants=config.constants,
        coupling_form=config.coupling_form,
    )

    grid = config.grid
    all_series: dict[tuple[str, float, float], MetricSeries] = {}
    csv_paths: list[Path] = []
    for qubit in config.qubits:
        for b_z in config.b_fields:
            env_b = dataclasses.replace(geometry, b_z=b_z)
            evolution = ConditionalEvolution(env_b, qubit)
            for p in config.polarizations:
                env = set_uniform_polarization(env_b, p)
                series = metric_series(env, qubit, config.amplitudes, grid, evolution=evolution)
                all_series[(qubit.value, b_z, p)] = series
                path = outdir / series_filename(qubit, b_z, p)
                write_series_csv(series, path)
                csv_paths.append(path)

    manifest = _build_manifest(config, geometry, [p.name for p in csv_paths])
    manifest_path = outdir / "manifest.json"
    with open(manifest_path, "w", newline="\n") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")

    return ScenarioRun(
        config=config,
        environment=geometry,
        series=all_series,
        csv_paths=csv_paths,
        manifest_path=manifest_path,
        manifest=manifest,
    )


def summarize_run(run: ScenarioRun) -> dict:
    """Per-series extrema, derivative-sign agreement and N/(1-F) ratio stats."""
    entries = {}
    for (qlabel, b_z, p), series in run.series.items():
        name = series_filename(QubitChoice.from_label(qlabel), b_z, p)
        entries[name] = {
            "qubit": qlabel,
            "b_z_tesla": b_z,
            "polarization": p,
            "max_negativity": float(np.max(series.negativity)),
            "max_one_minus_fidelity": float(np.max(series.one_minus_fidelity)),
            "min_coherence_mod": float(np.min(series.coherence_mod)),
            "derivative_sign_agreement": derivative_sign_agreement(series),
            "negativity_to_one_minus_fidelity": ratio_statistics(series),
        }
    return {"version": __version__, "seed": run.config.seed, "series": entries}


def write_summary(run: ScenarioRun, outdir) -> Path:
    summary = summarize_run(run)
    summary_path = Path(outdir) / "summary.json"
    with open(summary_path, "w", newline="\n") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return summary_path


def apply_preset(config: ScenarioConfig) -> ScenarioConfig:
    """Pin the figure-protocol fields, keeping seed/output/coupling choices."""
    return dataclasses.replace(
        config,
        nucleus_count=5,
        qubits=(QubitChoice.ZERO_ONE, QubitChoice.MINUS_ONE_ONE),
        b_fields=PRESET_FIELDS,
        polarizations=PRESET_POLARIZATIONS,
        amplitudes=QubitAmplitudes.equal_superposition(),
    )


def paper_figures(outdir, seed: int = 7) -> tuple[ScenarioRun, dict]:
    """Preset sweep: K=5, p in {0.1, 0.4, 0.7, 1}, B_z in {0, 0.2} T, both
    qubits, equal superposition.  Emits 16 series plus summary.json."""
    config = apply_preset(ScenarioConfig(seed=seed, output_path=str(outdir)))
    run = run_scenario(config)
    write_summary(run, outdir)
    return run, summarize_run(run)
