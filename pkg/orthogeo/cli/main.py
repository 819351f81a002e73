"""
CLI entry point.

Each sub-command lives in ``orthogeo/cli/commands/<name>.py`` and
exposes ``add_arguments(parser)`` and ``run(args) -> int``.

Exit codes: 0 success, 1 check failure, 2 input error, 3 runtime abort.
"""

from __future__ import annotations

import argparse
import importlib
import logging
import sys
from typing import List, Optional

from orthogeo import __version__
from orthogeo.core.config import settings
from orthogeo.core.exceptions import OrthoGeoError
from orthogeo.core.logging import setup_logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT = 2
EXIT_RUNTIME = 3

# command name → (module under orthogeo.cli.commands, help)
COMMANDS = {
    "train":     ("train", "train one adapter and write its run directory"),
    "eval":      ("evaluate", "score a checkpoint on a split (one metrics row)"),
    "gradcheck": ("gradcheck", "finite-difference checks of every analytic gradient"),
    "spectrum":  ("spectrum", "singular-value spectra of trained checkpoints"),
    "ablate":    ("ablate", "rank × seed ablation for both methods"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=settings.APP_NAME,
        description="Stiefel-constrained low-rank adapters: training, evaluation and analysis.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default=None, help=f"default: {settings.LOG_LEVEL}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (module_name, help_text) in COMMANDS.items():
        module = _command_module(module_name)
        cmd = sub.add_parser(name, help=help_text, description=help_text)
        module.add_arguments(cmd)
        cmd.set_defaults(handler=module.run)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help
        return int(exc.code or 0)

    setup_logging(args.log_level or settings.LOG_LEVEL, settings.LOG_FILE or None)
    try:
        return int(args.handler(args))
    except OrthoGeoError as exc:
        print(f"Error: {exc}", file=sys.stderr)
        if exc.exit_code == EXIT_RUNTIME:
            logger.error("[CLI] %s aborted: %s", args.command, exc, exc_info=True)
        return exc.exit_code


def _command_module(name: str):
    return importlib.import_module(f"orthogeo.cli.commands.{name}")
