"""
RunPipeline — thin coordinator for one training run.

Single Responsibility: wire the phases together in order.

  Build      → build_benchmark       (``orthogeo.services.bench.benchmark``)
  Train      → Trainer               (``orthogeo.services.bench.trainer``)
  Evaluate   → evaluate              (``orthogeo.services.metrics.evaluator``)
  Artifacts  → checkpoint / export   (``checkpoint.py``, ``orthogeo.utils.export``)

Usage::

    from orthogeo.services.orchestrator import run_pipeline

    outcome = run_pipeline.execute(config, Path("runs/orthogeo-r8"))
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Dict

import pandas as pd

from orthogeo.core.exceptions import TrainingAborted
from orthogeo.schemas.artifacts import RunManifest, StiefelCheck
from orthogeo.schemas.metrics import MetricsReport
from orthogeo.schemas.run_config import RunConfig
from orthogeo.services.adapters.base import AdapterKind, param_count
from orthogeo.services.bench.dataset import Split
from orthogeo.services.bench.trainer import TrainedRun, Trainer
from orthogeo.services.orchestrator import context as names
from orthogeo.services.orchestrator.checkpoint import make_checkpoint, save_checkpoint
from orthogeo.services.orchestrator.context import RunContext
from orthogeo.utils.export import write_csv, write_json

logger = logging.getLogger(__name__)


@dataclass
class RunOutcome:
    run: TrainedRun
    manifest: RunManifest
    reports: Dict[str, MetricsReport]
    out_dir: Path


class RunPipeline:
    """
    ``execute()`` flow:
      train → evaluate val + test → checkpoint → convergence → metrics → manifest
    """

    def execute(self, config: RunConfig, out_dir: Path | str) -> RunOutcome:
        t0 = time.perf_counter()
        ctx = RunContext(config=config, out_dir=Path(out_dir))
        ctx.out_dir.mkdir(parents=True, exist_ok=True)

        try:
            run = Trainer(config).run()
        except TrainingAborted as exc:
            _save_last_good(ctx, exc)
            raise

        reports = {
            split.value: run.evaluate(split)
            for split in (Split.VAL, Split.TEST)
        }

        ckpt = make_checkpoint(
            config, run.adapter.tensors(), run.steps_run, run.adapter.options(), run.optimizer
        )
        save_checkpoint(ckpt, ctx.record(names.CHECKPOINT))
        write_csv(run.history, ctx.record(names.CONVERGENCE))
        write_csv(pd.DataFrame([reports["test"].to_row()]), ctx.record(names.METRICS_CSV))
        write_json(
            {split: rep.model_dump(mode="json") for split, rep in reports.items()},
            ctx.record(names.METRICS_JSON),
        )
        manifest = _manifest(ctx, run, reports)
        write_json(manifest.model_dump(mode="json"), ctx.path(names.MANIFEST))

        _log_summary(run, reports, time.perf_counter() - t0)
        return RunOutcome(run=run, manifest=manifest, reports=reports, out_dir=ctx.out_dir)


# ─────────────────────────────────────────────────────────────────
# Private helpers (module-level, no state)
# ─────────────────────────────────────────────────────────────────

def _manifest(ctx: RunContext, run: TrainedRun, reports: Dict[str, MetricsReport]) -> RunManifest:
    cfg = ctx.config
    d_in, d_out = cfg.d_feat, cfg.d_emb
    return RunManifest(
        config=cfg,
        label=run.label,
        param_count={
            "adapter": run.adapter.param_count(),
            **{kind.value: param_count(kind, d_in, d_out, cfg.rank) for kind in AdapterKind},
        },
        steps_run=run.steps_run,
        stopped_early=run.stopped_early,
        best_val_mrr=run.best_val_mrr,
        final_val_mrr=run.final_val_mrr,
        stiefel_checks=[
            StiefelCheck(step=int(row.step), residual_a=float(row.residual_a), residual_b=float(row.residual_b))
            for row in run.stiefel_checks.itertuples(index=False)
        ],
        metrics=reports,
        artifacts=sorted(ctx.written + [names.MANIFEST]),
    )


def _save_last_good(ctx: RunContext, exc: TrainingAborted) -> None:
    if not exc.last_good:
        return
    ckpt = make_checkpoint(
        ctx.config, exc.last_good["tensors"], exc.step, optimizer=exc.last_good["optimizer"]
    )
    path = save_checkpoint(ckpt, ctx.record(names.CHECKPOINT))
    logger.error("[Pipeline] Training aborted at step %d; last good state saved to %s", exc.step, path)


def _log_summary(run: TrainedRun, reports: Dict[str, MetricsReport], elapsed: float) -> None:
    """Log a one-line summary of the completed pipeline."""
    test = reports["test"]
    logger.info(
        f"[Pipeline] {run.label} r={run.config.rank} seed={run.seed} completed in {elapsed:.2f}s: "
        f"test MRR {test.mrr:.5f}, "
        + ", ".join(f"Recall@{k} {v:.5f}" for k, v in sorted(test.recall_at.items()))
    )


# ── Singleton ────────────────────────────────────────────────────
run_pipeline = RunPipeline()
