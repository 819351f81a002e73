"""``orthogeo ablate`` — test MRR over a rank × seed grid for both methods."""

from __future__ import annotations

import argparse
from pathlib import Path
from typing import List

from orthogeo.cli.config_source import add_config_arguments, config_overrides, load_run_config
from orthogeo.core.config import settings
from orthogeo.core.exceptions import ConfigError
from orthogeo.services.analysis import rank_ablation
from orthogeo.services.analysis.ablation import DEFAULT_METHODS, DEFAULT_RANKS
from orthogeo.services.orchestrator.context import ABLATION
from orthogeo.utils.export import write_csv


def _int_list(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise ConfigError(f"expected comma-separated integers, got '{text}'") from exc


def add_arguments(parser: argparse.ArgumentParser) -> None:
    add_config_arguments(parser)
    parser.add_argument("--ranks", default=",".join(map(str, DEFAULT_RANKS)))
    parser.add_argument("--seeds", default="1,2,3")
    parser.add_argument("--methods", default=",".join(DEFAULT_METHODS))
    parser.add_argument("--workers", type=int, default=None, help=f"default: {settings.ABLATION_WORKERS}")
    parser.add_argument("--out", help=f"output directory (default: {settings.RUNS_DIR}/ablation)")


def run(args: argparse.Namespace) -> int:
    config = load_run_config(args.config, config_overrides(args))
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    workers = args.workers if args.workers is not None else settings.ABLATION_WORKERS
    if workers < 1:
        raise ConfigError(f"--workers must be >= 1, got {workers}")

    result = rank_ablation(
        config,
        ranks=_int_list(args.ranks),
        seeds=_int_list(args.seeds),
        methods=methods,
        workers=workers,
    )
    out_dir = Path(args.out) if args.out else Path(settings.RUNS_DIR) / "ablation"
    write_csv(result.cells, out_dir / ABLATION)
    write_csv(result.aggregate, out_dir / "ablation_summary.csv")
    print(result.aggregate.to_string(index=False))

    if result.failed_cells:
        for method, rank, seed, message in result.failed_cells:
            print(f"FAILED cell {method} r={rank} seed={seed}: {message}")
        return 1
    return 0
