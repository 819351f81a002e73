"""
Run configuration sources — key=value files, manifests and CLI flags.

Flags are generated from ``RunConfig`` fields (``rank`` → ``--rank``),
so every hyperparameter is settable from both a file and the command
line.  Precedence: RunConfig defaults < config file < flags.
"""

from __future__ import annotations

import argparse
import json
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, get_origin

from dotenv import dotenv_values
from pydantic import ValidationError

from orthogeo.core.exceptions import ConfigError
from orthogeo.schemas.run_config import RunConfig
from orthogeo.utils.export import read_json


def add_config_arguments(parser: argparse.ArgumentParser) -> None:
    """``--config`` plus one string flag per RunConfig field."""
    parser.add_argument(
        "--config",
        help="key=value config file or a manifest.json from an earlier run",
    )
    group = parser.add_argument_group("run config (override the config file)")
    for name, info in RunConfig.model_fields.items():
        default = info.get_default(call_default_factory=True)
        if isinstance(default, list):
            default = ",".join(str(v) for v in default)
        group.add_argument(
            f"--{name.replace('_', '-')}",
            dest=name,
            default=None,
            metavar=name.upper(),
            help=f"default: {getattr(default, 'value', default)}",
        )


def config_overrides(args: argparse.Namespace) -> Dict[str, Optional[str]]:
    return {name: getattr(args, name, None) for name in RunConfig.model_fields}


def load_run_config(
    path: Optional[str] = None,
    overrides: Optional[Mapping[str, Any]] = None,
) -> RunConfig:
    values: Dict[str, Any] = {}
    if path:
        values.update(_read_source(Path(path)))
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    try:
        values = {key: _coerce(key, value) for key, value in values.items()}
        return RunConfig.model_validate(values)
    except (ValidationError, ValueError) as exc:
        raise ConfigError(f"invalid run config: {exc}") from exc


def _read_source(path: Path) -> Dict[str, Any]:
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    if path.suffix.lower() == ".json":
        try:
            payload = read_json(path)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot parse {path}: {exc}") from exc
        if not isinstance(payload, dict):
            raise ConfigError(f"{path}: expected a JSON object")
        # a run manifest nests the config
        payload = payload.get("config", payload)
        if not isinstance(payload, dict):
            raise ConfigError(f"{path}: 'config' must be an object")
        return dict(payload)
    return {key.strip().lower(): value for key, value in dotenv_values(path).items()}


def _coerce(key: str, value: Any) -> Any:
    """Comma-separated strings become lists for list-typed fields."""
    info = RunConfig.model_fields.get(key)
    if info is not None and get_origin(info.annotation) is list and isinstance(value, str):
        return [int(part) for part in value.split(",") if part.strip()]
    return value
