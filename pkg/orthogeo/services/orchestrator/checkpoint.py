"""
Adapter checkpoints — save, load and rebuild the encoder they describe.

A checkpoint carries the full RunConfig, so the benchmark (taxonomy,
dataset, W₀) is regenerated from its seeds rather than stored.
"""

from __future__ import annotations

import json
import logging
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Tuple

import numpy as np
from pydantic import ValidationError

from orthogeo.core.exceptions import CheckpointError
from orthogeo.schemas.artifacts import AdapterCheckpoint
from orthogeo.schemas.run_config import RunConfig
from orthogeo.services.adapters.engine import adapter_engine
from orthogeo.services.bench.benchmark import Benchmark, build_benchmark
from orthogeo.services.bench.encoder import BiEncoder
from orthogeo.services.optim import AdamState
from orthogeo.utils.arrays import decode_arrays, encode_arrays
from orthogeo.utils.export import write_json

logger = logging.getLogger(__name__)


def make_checkpoint(
    config: RunConfig,
    tensors: Mapping[str, np.ndarray],
    step: int,
    options: Optional[Mapping[str, Any]] = None,
    optimizer: Optional[AdamState] = None,
) -> AdapterCheckpoint:
    options = config.adapter_options() if options is None else options
    return AdapterCheckpoint(
        config=config,
        method=config.method,
        rank=config.rank,
        alpha=config.alpha,
        options={k: v.value if isinstance(v, Enum) else v for k, v in options.items()},
        step=step,
        tensors=encode_arrays(tensors),
        optimizer=optimizer.to_dict() if optimizer is not None else None,
    )


def save_checkpoint(ckpt: AdapterCheckpoint, path: Path | str) -> Path:
    return write_json(ckpt.model_dump(mode="json"), path)


def load_checkpoint(path: Path | str) -> AdapterCheckpoint:
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise CheckpointError(f"checkpoint not found: {path}") from exc
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CheckpointError(f"cannot parse checkpoint {path}: {exc}") from exc
    try:
        return AdapterCheckpoint.model_validate(raw)
    except ValidationError as exc:
        raise CheckpointError(f"invalid checkpoint {path}: {exc}") from exc


def restore_encoder(ckpt: AdapterCheckpoint) -> Tuple[Benchmark, BiEncoder]:
    """Regenerate the benchmark and rebuild the adapted encoder."""
    cfg = ckpt.config
    bench = build_benchmark(cfg)
    try:
        tensors: Dict[str, np.ndarray] = decode_arrays(
            {name: payload.model_dump() for name, payload in ckpt.tensors.items()}
        )
        adapter = adapter_engine.restore(
            ckpt.method, bench.w0, ckpt.rank, ckpt.alpha, tensors, **ckpt.options
        )
    except (KeyError, ValueError) as exc:
        raise CheckpointError(f"checkpoint tensors are inconsistent: {exc}") from exc
    logger.debug("[Checkpoint] Restored %s r=%d at step %d", adapter.label, ckpt.rank, ckpt.step)
    return bench, bench.encoder(adapter, cfg.temperature)


def restore_optimizer(ckpt: AdapterCheckpoint) -> Optional[AdamState]:
    return AdamState.from_dict(ckpt.optimizer) if ckpt.optimizer is not None else None
