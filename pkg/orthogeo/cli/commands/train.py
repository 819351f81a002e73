"""``orthogeo train`` — one training run, artifacts in a run directory."""

from __future__ import annotations

import argparse
from pathlib import Path

from orthogeo.cli.config_source import add_config_arguments, config_overrides, load_run_config
from orthogeo.core.config import settings
from orthogeo.schemas.run_config import RunConfig
from orthogeo.services.orchestrator import run_pipeline


def add_arguments(parser: argparse.ArgumentParser) -> None:
    add_config_arguments(parser)
    parser.add_argument("--out", help=f"run directory (default: {settings.RUNS_DIR}/<method>-r<rank>-s<seed>)")


def default_run_dir(config: RunConfig) -> Path:
    return Path(settings.RUNS_DIR) / f"{config.method}-r{config.rank}-s{config.seed}"


def run(args: argparse.Namespace) -> int:
    config = load_run_config(args.config, config_overrides(args))
    out_dir = Path(args.out) if args.out else default_run_dir(config)
    outcome = run_pipeline.execute(config, out_dir)

    test = outcome.reports["test"]
    print(f"{outcome.run.label}: {outcome.run.steps_run} steps, test MRR {test.mrr:.5f}")
    print(f"Artifacts written to {outcome.out_dir}")
    return 0
