"""
Run artifacts — manifest and adapter checkpoint.

Both are plain JSON on disk; arrays use the ``{"shape", "data"}``
codec from ``orthogeo.utils.arrays``.
"""

from __future__ import annotations

from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

from orthogeo.schemas.metrics import MetricsReport
from orthogeo.schemas.run_config import RunConfig

FORMAT_VERSION = 1


class ArrayPayload(BaseModel):
    shape: List[int]
    data:  List[float]


class AdapterCheckpoint(BaseModel):
    """Trainable tensors plus everything needed to rebuild the encoder."""
    format_version: int = FORMAT_VERSION
    config:         RunConfig
    method:         str
    rank:           int
    alpha:          float
    options:        Dict[str, Any] = Field(default_factory=dict)
    step:           int = 0
    tensors:        Dict[str, ArrayPayload]
    optimizer:      Optional[Dict[str, Any]] = None


class StiefelCheck(BaseModel):
    step:       int
    residual_a: float
    residual_b: float


class RunManifest(BaseModel):
    """Self-contained record of one run: config, sizes, outcome."""
    format_version: int = FORMAT_VERSION
    config:         RunConfig
    label:          str
    param_count:    Dict[str, int]
    steps_run:      int
    stopped_early:  bool
    best_val_mrr:   float
    final_val_mrr:  float
    stiefel_checks: List[StiefelCheck] = Field(default_factory=list)
    metrics:        Dict[str, MetricsReport] = Field(default_factory=dict)
    artifacts:      List[str] = Field(default_factory=list)
