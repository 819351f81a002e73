"""
Schemas — pydantic models for run configuration and on-disk artifacts.

Importing from here keeps service and CLI modules thin.
"""

from orthogeo.schemas.artifacts import (
    AdapterCheckpoint,
    ArrayPayload,
    RunManifest,
    StiefelCheck,
)
from orthogeo.schemas.metrics import MetricsReport
from orthogeo.schemas.run_config import RunConfig

__all__ = [
    "AdapterCheckpoint",
    "ArrayPayload",
    "MetricsReport",
    "RunConfig",
    "RunManifest",
    "StiefelCheck",
]
