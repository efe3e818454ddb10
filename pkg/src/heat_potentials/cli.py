"""Batch commands reproducing the experiments; each writes one CSV table."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
from pydantic import ValidationError

from configuration import OUTPUT_DIR, RED, RESET, VERBOSE
from heat_potentials.domain.ExperimentCommand import ExperimentCommand
from heat_potentials.domain.ExperimentConfig import ExperimentConfig
from heat_potentials.exceptions import ConfigInvalid, HeatPotentialsError
from heat_potentials.experiments._common import write_table
from heat_potentials.experiments.convergence import run_convergence
from heat_potentials.experiments.fgt_bench import run_fgt_bench

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="heat-potentials", description=__doc__)
    commands = parser.add_subparsers(dest="command", required=True)
    for command in ExperimentCommand:
        sub = commands.add_parser(str(command))
        sub.add_argument("--config", type=Path, help="JSON file with ExperimentConfig fields")
        sub.add_argument("--out", help="CSV path; stdout when missing")
        sub.add_argument("--n-soe", type=int, dest="n_soe", help="SOE order, replaces soe_orders")
        sub.add_argument("--targets", type=int, help="number of equispaced targets")
        sub.add_argument("--seed", type=int)
        sub.add_argument("--tol", type=float)
        sub.add_argument(
            "--export", action="store_true", help=f"write profile, front and snapshot CSVs under {OUTPUT_DIR}"
        )
        sub.add_argument("--export-dir", dest="export_dir", help="directory for the exported CSVs")
        sub.add_argument("--verbose", action="store_true")
    return parser


def load_config(args: argparse.Namespace) -> ExperimentConfig:
    """File values first, then flags; the subcommand must agree with the file."""
    fields = {}
    if args.config is not None:
        try:
            fields = json.loads(args.config.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigInvalid(f"cannot read {args.config}: {exc}") from exc
        if not isinstance(fields, dict):
            raise ConfigInvalid(f"{args.config} must hold a JSON object")
        if fields.get("command", args.command) != args.command:
            raise ConfigInvalid(f"{args.config} is a {fields['command']} config, not {args.command}")
    overrides = {
        "out": args.out,
        "targets": args.targets,
        "seed": args.seed,
        "tol": args.tol,
        "export_dir": args.export_dir,
    }
    fields.update({key: value for key, value in overrides.items() if value is not None})
    if args.n_soe is not None:
        fields["soe_orders"] = [args.n_soe]
    if args.export and fields.get("export_dir") is None:
        fields["export_dir"] = str(OUTPUT_DIR / args.command)
    fields["command"] = args.command
    return ExperimentConfig.model_validate(fields)


def run(config: ExperimentConfig, verbose: bool = False):
    if config.command == ExperimentCommand.FGT_BENCH:
        return run_fgt_bench(config, verbose)
    return run_convergence(config, verbose)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args)
        table = run(config, args.verbose or VERBOSE)
        write_table(table, config.out)
    except (ConfigInvalid, ValidationError) as exc:
        print(f"{RED}ERROR: {type(exc).__name__}: {exc}{RESET}", file=sys.stderr, flush=True)
        return EXIT_CONFIG
    except (HeatPotentialsError, np.linalg.LinAlgError) as exc:
        print(f"{RED}ERROR: {type(exc).__name__}: {exc}{RESET}", file=sys.stderr, flush=True)
        return EXIT_SOLVER
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
