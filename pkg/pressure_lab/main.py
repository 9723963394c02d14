#!/usr/bin/env python3
"""
pressure-lab command line.

Usage:
    pressure-lab pressure --config templates/catmap_phi0.json
    pressure-lab validate --config templates/catmap_phi0.json --out results/catmap --threads 4
    pressure-lab --help

Exit status: 0 on success, 1 when the computation itself fails (for example
an empty orbit catalog), 2 for an invalid or unreadable config or an
unwritable output directory, 3 when a budget ran out and partial results
were written.
"""
import argparse
import logging
import os
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from pressure_lab import export
from pressure_lab.config import LOG_LEVEL, THREADS
from pressure_lab.errors import ConfigValidationError, PressureLabError
from pressure_lab.models import ExperimentConfig, SftModel
from pressure_lab.pipeline import PIPELINES
from pressure_lab.utils.validate import load_experiment

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2
EXIT_BUDGET = 3

COMMANDS = list(PIPELINES)


def _prepare_output(path: Path) -> bool:
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        logger.error(f"cannot create output directory {path}: {e}")
        return False
    if not os.access(path, os.W_OK):
        logger.error(f"output directory {path} is not writable")
        return False
    return True


def run(config: ExperimentConfig, threads: int = THREADS) -> int:
    """Run one validated experiment; writes result files, summary.txt and run_manifest.json."""
    out = Path(config.output_dir)
    if not _prepare_output(out):
        return EXIT_INVALID

    label = config.system.kind if isinstance(config.system, SftModel) else config.system.label
    logger.info(f"running {config.command} on {label} (seed {config.seed}, {threads} threads)")
    try:
        outcome = PIPELINES[config.command](config, out, threads)
    except (PressureLabError, ValueError, ArithmeticError) as e:
        logger.error(f"{config.command} failed: {e}")
        return EXIT_FAILED
    except OSError as e:
        logger.error(f"cannot write results to {out}: {e}")
        return EXIT_INVALID

    status = EXIT_BUDGET if outcome.exhausted else EXIT_OK
    if outcome.exhausted:
        logger.warning("budget exhausted; partial results written")
    header = [
        f"command: {config.command}",
        f"system: {label}",
        f"seed: {config.seed}",
        f"config sha256: {export.config_digest(config)}",
    ]
    try:
        files = list(outcome.files)
        files.append(export.write_summary(out / "summary.txt", header + outcome.summary))
        export.write_manifest(out / "run_manifest.json", config, files, status)
    except OSError as e:
        logger.error(f"cannot write results to {out}: {e}")
        return EXIT_INVALID
    for line in outcome.summary:
        logger.info(line)
    logger.info(f"wrote {len(files) + 1} files to {out}")
    return status


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pressure-lab",
        description="Estimate topological pressure of conservative torus maps and symbolic systems",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  pressure-lab orbits --config templates/standard_map.json
  pressure-lab pressure --config templates/catmap_phi0.json --seed 7
  pressure-lab transition --config templates/catmap_transition.json --out results/transition
        """,
    )
    parser.add_argument("command", choices=COMMANDS, help="Pipeline to run")
    parser.add_argument("--config", required=True, help="Path to the JSON experiment config")
    parser.add_argument("--out", help="Output directory (overrides output_dir in the config)")
    parser.add_argument("--seed", type=int, help="Seed (overrides the config)")
    parser.add_argument("--threads", type=int, default=THREADS, help="Worker threads (default: $PRESSURE_LAB_THREADS or 1)")
    parser.add_argument("--quiet", action="store_true", help="Only log warnings and errors")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING if args.quiet else LOG_LEVEL,
        format="%(asctime)s - %(levelname)s - %(message)s",
    )
    if args.threads < 1:
        logger.error("--threads must be >= 1")
        return EXIT_INVALID

    overrides: Dict[str, Any] = {"command": args.command}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.out is not None:
        overrides["output_dir"] = args.out

    try:
        config = load_experiment(args.config, overrides)
    except ConfigValidationError as e:
        logger.error(f"invalid config {args.config}: {e.detail}")
        for error in e.errors:
            logger.error(f"  at {'/'.join(str(p) for p in error['loc']) or '<root>'}: {error['msg']}")
        return EXIT_INVALID
    return run(config, args.threads)


if __name__ == "__main__":
    sys.exit(main())
