"""Ranking metrics — MRR, Recall@k, NDCG@k and split evaluation."""

from orthogeo.services.metrics.evaluator import build_report, evaluate, rank_split
from orthogeo.services.metrics.ranking import RankedRun, mrr, ndcg_at_k, recall_at_k

__all__ = ["RankedRun", "build_report", "evaluate", "mrr", "ndcg_at_k", "rank_split", "recall_at_k"]
