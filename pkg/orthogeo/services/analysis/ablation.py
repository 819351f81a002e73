"""
Rank ablation — test MRR as a function of rank for each method.

Single Responsibility: train every (method, rank, seed) cell, collect
per-cell MRR, and aggregate in a fixed order.  Cells are independent;
with ``workers > 1`` they run in separate processes.  A failing cell is
logged and recorded, the others still run.
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from orthogeo.core.exceptions import InvalidInput
from orthogeo.schemas.run_config import RunConfig
from orthogeo.services.adapters.engine import adapter_engine
from orthogeo.services.bench.dataset import Split
from orthogeo.services.bench.trainer import train
from orthogeo.services.metrics.evaluator import rank_split
from orthogeo.services.metrics.ranking import mrr

logger = logging.getLogger(__name__)

DEFAULT_RANKS = (2, 4, 8, 16)
DEFAULT_METHODS = ("orthogeo", "lora")
CELL_COLUMNS = ["method", "r", "seed", "mrr"]
AGGREGATE_COLUMNS = ["method", "r", "mean_mrr", "n_seeds", "n_failed"]


@dataclass(frozen=True)
class CellResult:
    method: str
    rank: int
    seed: int
    mrr: float                    # NaN when the cell failed
    error: Optional[str] = None


@dataclass
class AblationRecord:
    method: str
    rank: int
    seed_mrrs: List[float]
    failures: Dict[int, str] = field(default_factory=dict)

    @property
    def mean_mrr(self) -> float:
        ok = [v for v in self.seed_mrrs if not np.isnan(v)]
        return float(np.mean(ok)) if ok else float("nan")


@dataclass
class AblationResult:
    records: List[AblationRecord]
    cells: pd.DataFrame
    aggregate: pd.DataFrame

    @property
    def failed_cells(self) -> List[Tuple[str, int, int, str]]:
        return [
            (rec.method, rec.rank, seed, msg)
            for rec in self.records
            for seed, msg in rec.failures.items()
        ]


def rank_ablation(
    config: RunConfig,
    ranks: Sequence[int] = DEFAULT_RANKS,
    seeds: Sequence[int] = (1, 2, 3),
    methods: Sequence[str] = DEFAULT_METHODS,
    workers: int = 1,
) -> AblationResult:
    ranks = sorted(set(int(r) for r in ranks))
    seeds = sorted(set(int(s) for s in seeds))
    limit = min(config.d_feat, config.d_emb)
    if not ranks or not seeds:
        raise InvalidInput("ablation needs at least one rank and one seed")
    if ranks[0] < 1 or ranks[-1] > limit:
        raise InvalidInput(f"ranks must lie in [1, {limit}], got {ranks}")
    for method in methods:
        adapter_engine.resolve(method)

    base = config.model_dump(mode="json")
    cells = [
        {**base, "method": method, "rank": r, "seed": seed}
        for method in methods
        for r in ranks
        for seed in seeds
    ]
    t0 = time.perf_counter()
    logger.info(
        "[Ablation] %d cells (%s × ranks %s × seeds %s), %d worker(s)",
        len(cells), "/".join(methods), ranks, seeds, workers,
    )

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_cell, cells))
    else:
        results = [_run_cell(cell) for cell in cells]

    result = _reduce(results, methods, ranks, seeds)
    logger.info(
        "[Ablation] Completed in %.2fs, %d failed cell(s)",
        time.perf_counter() - t0, len(result.failed_cells),
    )
    return result


# ─────────────────────────────────────────────────────────────────
# Private helpers
# ─────────────────────────────────────────────────────────────────

def _label(method: str) -> str:
    return adapter_engine.resolve(method).label


def _run_cell(payload: Dict[str, Any]) -> CellResult:
    """Train and score one cell; never raises."""
    method, rank, seed = payload["method"], payload["rank"], payload["seed"]
    try:
        run = train(RunConfig.model_validate(payload))
        score = mrr(rank_split(run.encoder, run.dataset, Split.TEST))
        return CellResult(method, rank, seed, score)
    except Exception as exc:
        logger.error(
            "[Ablation] Cell %s r=%d seed=%d failed: %s", method, rank, seed, exc,
            exc_info=True,
        )
        return CellResult(method, rank, seed, float("nan"), f"{type(exc).__name__}: {exc}")


def _reduce(
    results: Sequence[CellResult],
    methods: Sequence[str],
    ranks: Sequence[int],
    seeds: Sequence[int],
) -> AblationResult:
    by_cell = {(c.method, c.rank, c.seed): c for c in results}
    records: List[AblationRecord] = []
    for method in methods:
        for r in ranks:
            cell_list = [by_cell[(method, r, s)] for s in seeds]
            records.append(
                AblationRecord(
                    method=_label(method),
                    rank=r,
                    seed_mrrs=[c.mrr for c in cell_list],
                    failures={c.seed: c.error for c in cell_list if c.error},
                )
            )

    cell_rows = [
        {"method": _label(c.method), "r": c.rank, "seed": c.seed, "mrr": c.mrr}
        for method in methods
        for r in ranks
        for c in (by_cell[(method, r, s)] for s in seeds)
    ]
    aggregate_rows = [
        {
            "method": rec.method,
            "r": rec.rank,
            "mean_mrr": rec.mean_mrr,
            "n_seeds": len(rec.seed_mrrs),
            "n_failed": len(rec.failures),
        }
        for rec in records
    ]
    return AblationResult(
        records=records,
        cells=pd.DataFrame(cell_rows, columns=CELL_COLUMNS),
        aggregate=pd.DataFrame(aggregate_rows, columns=AGGREGATE_COLUMNS),
    )
