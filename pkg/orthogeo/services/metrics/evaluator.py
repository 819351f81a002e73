"""
Evaluator — score a split against every concept and summarize.

Single Responsibility: encoder + dataset → MetricsReport.
"""

from __future__ import annotations

import logging
from typing import Optional, Sequence

from orthogeo.schemas.metrics import MetricsReport
from orthogeo.services.bench.dataset import RetrievalDataset, Split
from orthogeo.services.bench.encoder import BiEncoder
from orthogeo.services.metrics.ranking import RankedRun, mrr, ndcg_at_k, recall_at_k

logger = logging.getLogger(__name__)

DEFAULT_KS = (1, 3)


def build_report(
    run: RankedRun,
    ks: Sequence[int] = DEFAULT_KS,
    method: str = "",
    split: str = "",
) -> MetricsReport:
    return MetricsReport(
        method=method,
        split=split,
        n_queries=len(run),
        mrr=mrr(run),
        recall_at={k: recall_at_k(run, k) for k in ks},
        ndcg_at={k: ndcg_at_k(run, k) for k in ks},
    )


def rank_split(
    enc: BiEncoder,
    dataset: RetrievalDataset,
    split: Split = Split.TEST,
) -> RankedRun:
    """Rank every concept for each description of *split*."""
    view = dataset.view(split)
    queries = enc.encode_batch(view.descriptions)
    concepts = enc.encode_batch(dataset.candidate_features)
    return RankedRun.from_scores(queries @ concepts.T, view.gold, dataset.candidate_ids)


def evaluate(
    enc: BiEncoder,
    dataset: RetrievalDataset,
    split: Split = Split.TEST,
    ks: Sequence[int] = DEFAULT_KS,
    method: Optional[str] = None,
) -> MetricsReport:
    split = Split(split)
    if method is None:
        method = enc.adapter.label if enc.adapter is not None else "Base"
    report = build_report(rank_split(enc, dataset, split), ks, method, split.value)
    logger.debug("[Evaluator] %s on %s: MRR %.5f over %d queries", method, split.value, report.mrr, report.n_queries)
    return report
