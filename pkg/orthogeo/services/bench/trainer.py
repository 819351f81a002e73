"""
Trainer — contrastive fine-tuning of the adapted bi-encoder.

Single Responsibility: run AdamW over shuffled mini-batches until the
step budget or early stopping ends the run, recording the convergence
log and the Stiefel checks along the way.

Loop::

    batch → encode queries + in-batch gold concepts (one forward)
          → InfoNCE → backward through normalization and adapter
          → adamw_step on the Euclidean tensors
    every eval_interval steps    → validation MRR, early-stopping bookkeeping
    every stiefel_interval steps → ‖AᵀA − I‖_F, ‖BᵀB − I‖_F (OrthoGeo only)
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from orthogeo.core.config import settings
from orthogeo.core.exceptions import NonFiniteGradient, TrainingAborted
from orthogeo.schemas.metrics import MetricsReport
from orthogeo.schemas.run_config import RunConfig
from orthogeo.services.adapters.base import BaseAdapter
from orthogeo.services.adapters.engine import adapter_engine
from orthogeo.services.bench.benchmark import Benchmark, build_benchmark
from orthogeo.services.bench.dataset import RetrievalDataset, Split, SplitView
from orthogeo.services.bench.encoder import BiEncoder
from orthogeo.services.bench.loss import infonce_loss
from orthogeo.services.linalg import stiefel_residual
from orthogeo.services.metrics import evaluate, mrr, rank_split
from orthogeo.services.optim import AdamState, adamw_step

logger = logging.getLogger(__name__)

HISTORY_COLUMNS = ["step", "train_loss", "val_mrr"]
STIEFEL_COLUMNS = ["step", "residual_a", "residual_b"]


@dataclass
class TrainedRun:
    config: RunConfig
    benchmark: Benchmark
    adapter: BaseAdapter
    encoder: BiEncoder
    optimizer: AdamState
    history: pd.DataFrame
    stiefel_checks: pd.DataFrame
    steps_run: int
    stopped_early: bool
    best_val_mrr: float
    elapsed: float

    @property
    def label(self) -> str:
        return self.adapter.label

    @property
    def seed(self) -> int:
        return self.config.seed

    @property
    def final_val_mrr(self) -> float:
        return float(self.history["val_mrr"].iloc[-1])

    @property
    def dataset(self) -> RetrievalDataset:
        return self.benchmark.dataset

    def evaluate(self, split: Split = Split.TEST, ks: Optional[Sequence[int]] = None) -> MetricsReport:
        return evaluate(self.encoder, self.dataset, split, ks or self.config.ks)


class Trainer:
    def __init__(self, config: RunConfig, benchmark: Optional[Benchmark] = None) -> None:
        self.config = config
        self.benchmark = benchmark or build_benchmark(config)

    # ─────────────────────────────────────────────────────────
    #  PUBLIC API
    # ─────────────────────────────────────────────────────────

    def run(self) -> TrainedRun:
        cfg = self.config
        t0 = time.perf_counter()

        init_rng, order_rng = (
            np.random.default_rng(s) for s in np.random.SeedSequence(cfg.seed).spawn(2)
        )
        adapter = adapter_engine.create(
            cfg.method, self.benchmark.w0, cfg.rank, cfg.alpha, init_rng, **cfg.adapter_options()
        )
        enc = self.benchmark.encoder(adapter, cfg.temperature)
        state = AdamState(**cfg.optimizer_options())
        lr_scale = adapter.lr_scales(cfg.lr_group_scales())
        if lr_scale:
            logger.debug("[Trainer] %s step multipliers: %s", adapter.label, lr_scale)
        train_view = self.benchmark.dataset.view(Split.TRAIN)
        batches = _batch_stream(len(train_view), cfg.batch_size, order_rng)

        history: List[Dict[str, float]] = []
        checks: List[Dict[str, float]] = []
        last_good = _snapshot(adapter, state)

        batch = next(batches)
        loss, grads = self._loss_and_grads(enc, train_view, batch)
        best = self._val_mrr(enc)
        history.append({"step": 0, "train_loss": loss, "val_mrr": best})
        self._check_stiefel(adapter, 0, checks)
        logger.info("[Trainer] %s seed=%d: step 0 val MRR %.5f", adapter.label, cfg.seed, best)

        stale, window, step, stopped_early = 0, [], 0, False
        while step < cfg.max_steps:
            if grads is None:
                raise TrainingAborted(
                    f"non-finite loss at step {step + 1}", last_good=last_good, step=step
                )
            try:
                adamw_step(adapter.tensors(), grads, state, adapter.decay_exempt, lr_scale)
            except NonFiniteGradient as exc:
                raise TrainingAborted(
                    f"step {step + 1}: {exc}", last_good=last_good, step=step
                ) from exc
            step += 1
            window.append(loss)
            last_good = _snapshot(adapter, state)

            if step % cfg.stiefel_interval == 0:
                self._check_stiefel(adapter, step, checks)

            if step % cfg.eval_interval == 0 or step == cfg.max_steps:
                val = self._val_mrr(enc)
                history.append({"step": step, "train_loss": float(np.mean(window)), "val_mrr": val})
                window = []
                logger.info("[Trainer] %s seed=%d: step %d val MRR %.5f", adapter.label, cfg.seed, step, val)
                if val > best + cfg.min_delta:
                    best, stale = val, 0
                else:
                    stale += 1
                    if stale >= cfg.patience:
                        stopped_early = True
                        break

            if step < cfg.max_steps:
                loss, grads = self._loss_and_grads(enc, train_view, next(batches))

        run = TrainedRun(
            config=cfg,
            benchmark=self.benchmark,
            adapter=adapter,
            encoder=enc,
            optimizer=state,
            history=pd.DataFrame(history, columns=HISTORY_COLUMNS),
            stiefel_checks=pd.DataFrame(checks, columns=STIEFEL_COLUMNS),
            steps_run=step,
            stopped_early=stopped_early,
            best_val_mrr=best,
            elapsed=time.perf_counter() - t0,
        )
        _log_summary(run)
        return run

    # ─────────────────────────────────────────────────────────
    #  PRIVATE
    # ─────────────────────────────────────────────────────────

    def _loss_and_grads(
        self, enc: BiEncoder, view: SplitView, idx: np.ndarray
    ) -> Tuple[float, Optional[Dict[str, np.ndarray]]]:
        """Loss on one batch; grads is None when the loss is not finite."""
        dataset = self.benchmark.dataset
        gold = view.gold[idx]
        concept_ids, gold_pos = np.unique(gold, return_inverse=True)
        concept_rows = dataset.candidate_features[np.searchsorted(dataset.candidate_ids, concept_ids)]
        n = idx.shape[0]

        emb, cache = enc.forward(np.vstack([view.descriptions[idx], concept_rows]))
        loss, g_q, g_c = infonce_loss(emb[:n], emb[n:], gold_pos.reshape(-1), enc.temperature)
        if not np.isfinite(loss):
            return loss, None
        return loss, enc.backward(cache, np.vstack([g_q, g_c]))

    def _val_mrr(self, enc: BiEncoder) -> float:
        return mrr(rank_split(enc, self.benchmark.dataset, Split.VAL))

    def _check_stiefel(self, adapter: BaseAdapter, step: int, checks: List[Dict[str, float]]) -> None:
        factors = getattr(adapter, "factors", None)
        if factors is None:
            return
        f = factors()
        res_a, res_b = stiefel_residual(f.a), stiefel_residual(f.b)
        checks.append({"step": step, "residual_a": res_a, "residual_b": res_b})
        if max(res_a, res_b) > settings.STIEFEL_TOLERANCE:
            logger.warning(
                "[Trainer] Stiefel residual above %.1e at step %d: A %.3e, B %.3e",
                settings.STIEFEL_TOLERANCE, step, res_a, res_b,
            )
        else:
            logger.debug("[Trainer] Stiefel check step %d: A %.3e, B %.3e", step, res_a, res_b)


def train(config: RunConfig, seed: Optional[int] = None) -> TrainedRun:
    """Train one adapter; ``seed`` overrides ``config.seed``."""
    if seed is not None:
        config = config.model_copy(update={"seed": seed})
    return Trainer(config).run()


# ─────────────────────────────────────────────────────────────────
# Private helpers
# ─────────────────────────────────────────────────────────────────

def _batch_stream(n: int, batch_size: int, rng: np.random.Generator) -> Iterator[np.ndarray]:
    """Endless shuffled epochs; the last batch of an epoch may be short."""
    if n == 0:
        raise TrainingAborted("training split is empty")
    while True:
        order = rng.permutation(n)
        for start in range(0, n, batch_size):
            yield order[start:start + batch_size]


def _snapshot(adapter: BaseAdapter, state: AdamState) -> Dict[str, object]:
    return {
        "tensors": {k: v.copy() for k, v in adapter.tensors().items()},
        "optimizer": state.copy(),
    }


def _log_summary(run: TrainedRun) -> None:
    """Log a one-line summary of the completed run."""
    logger.info(
        f"[Trainer] {run.label} seed={run.seed} completed in {run.elapsed:.2f}s: "
        f"{run.steps_run} steps, best val MRR {run.best_val_mrr:.5f}, "
        f"final val MRR {run.final_val_mrr:.5f}"
        + (" (early stop)" if run.stopped_early else "")
    )
