"""Run orchestration — one training run from config to artifacts."""

from orthogeo.services.orchestrator.checkpoint import (
    load_checkpoint,
    make_checkpoint,
    restore_encoder,
    restore_optimizer,
    save_checkpoint,
)
from orthogeo.services.orchestrator.context import RunContext
from orthogeo.services.orchestrator.pipeline import RunOutcome, RunPipeline, run_pipeline

__all__ = [
    "RunContext",
    "RunOutcome",
    "RunPipeline",
    "load_checkpoint",
    "make_checkpoint",
    "restore_encoder",
    "restore_optimizer",
    "run_pipeline",
]
