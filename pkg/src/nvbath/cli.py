"""Command-line entry point.

Config file values are the baseline; explicit CLI flags override them, and
``--preset paper-figures`` then pins the sweep protocol (K=5, both qubits,
both fields, the four preset polarizations) while keeping seed, output
directory and coupling form from the resolved options.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

from .errors import ConfigurationError
from .evolution import QubitChoice
from .scenario import (
    ScenarioConfig,
    apply_preset,
    run_scenario,
    validate_config,
    write_summary,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nvbath",
        description="Simulate NV-center qubit dephasing in a seeded nuclear "
                    "spin bath and emit negativity / one-minus-fidelity time series.",
    )
    parser.add_argument("--config", metavar="PATH",
                        help="YAML/JSON config file or a previous run manifest")
    parser.add_argument("--preset", choices=["paper-figures"],
                        help="run the full 16-series figure protocol")
    parser.add_argument("--seed", type=int, metavar="INT")
    parser.add_argument("--outdir", metavar="PATH")
    parser.add_argument("--qubit", choices=["01", "-11", "both"])
    parser.add_argument("--bz", type=float, metavar="TESLA")
    parser.add_argument("--polarizations", metavar="P1,P2,...",
                        help="comma-separated polarizations in [-1, 1]")
    parser.add_argument("--tmax", type=float, metavar="US")
    parser.add_argument("--steps", type=int, metavar="INT")
    parser.add_argument("--coupling-form", choices=["standard", "paper"])
    return parser


def _apply_overrides(config: ScenarioConfig, args: argparse.Namespace) -> ScenarioConfig:
    updates = {}
    if args.seed is not None:
        updates["seed"] = args.seed
    if args.outdir is not None:
        updates["output_path"] = args.outdir
    if args.qubit is not None:
        updates["qubits"] = (
            (QubitChoice.ZERO_ONE, QubitChoice.MINUS_ONE_ONE)
            if args.qubit == "both"
            else (QubitChoice.from_label(args.qubit),)
        )
    if args.bz is not None:
        updates["b_fields"] = (args.bz,)
    if args.polarizations is not None:
        try:
            values = tuple(float(p) for p in args.polarizations.split(",") if p.strip())
        except ValueError:
            raise ConfigurationError(
                f"polarizations: cannot parse {args.polarizations!r} as a comma list"
            ) from None
        if not values or any(abs(p) > 1 for p in values):
            raise ConfigurationError("polarizations must be a non-empty comma list within [-1, 1]")
        updates["polarizations"] = values
    if args.tmax is not None:
        if not args.tmax > 0:
            raise ConfigurationError(f"t_max must be positive, got {args.tmax}")
        updates["t_max"] = args.tmax
    if args.steps is not None:
        if args.steps < 3:
            raise ConfigurationError(f"n_steps must be >= 3, got {args.steps}")
        updates["n_steps"] = args.steps
    if args.coupling_form is not None:
        updates["coupling_form"] = (
            "paper_literal" if args.coupling_form == "paper" else args.coupling_form
        )
    return dataclasses.replace(config, **updates) if updates else config


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.config:
            with open(args.config) as fh:
                config = validate_config(fh.read())
        else:
            config = ScenarioConfig()
        config = _apply_overrides(config, args)
        if args.preset == "paper-figures":
            config = apply_preset(config)

        run = run_scenario(config)
        if args.preset == "paper-figures":
            summary_path = write_summary(run, config.output_path)
            print(f"summary: {summary_path}")
    except ConfigurationError as err:
        print(f"nvbath: configuration error: {err}", file=sys.stderr)
        return 2
    except OSError as err:
        print(f"nvbath: i/o error: {err}", file=sys.stderr)
        return 1

    print(f"wrote {len(run.csv_paths)} series to {run.config.output_path}")
    print(f"manifest: {run.manifest_path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
