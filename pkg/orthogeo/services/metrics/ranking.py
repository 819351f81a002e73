"""
Ranking metrics with a single gold item per query.

Candidates are ordered by descending score; equal scores are ordered
by ascending candidate id, so every ranking is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from orthogeo.core.exceptions import EmptyRun, InvalidInput, MissingGold


@dataclass(frozen=True)
class RankedRun:
    ranks: np.ndarray             # 1-based rank of the gold candidate per query
    n_candidates: int

    def __post_init__(self) -> None:
        ranks = np.asarray(self.ranks)
        if ranks.ndim != 1:
            raise InvalidInput(f"ranks must be 1-D, got shape {ranks.shape}")
        if ranks.size and (ranks.min() < 1 or ranks.max() > self.n_candidates):
            raise InvalidInput(f"ranks must lie in [1, {self.n_candidates}]")

    def __len__(self) -> int:
        return int(np.asarray(self.ranks).shape[0])

    @classmethod
    def from_scores(
        cls,
        scores: np.ndarray,
        gold: np.ndarray,
        candidate_ids: np.ndarray,
    ) -> "RankedRun":
        """
        Gold rank = 1 + #(higher score) + #(equal score, smaller id).

        ``scores`` is queries × candidates with columns in ``candidate_ids`` order.
        """
        scores = np.asarray(scores, dtype=np.float64)
        gold = np.asarray(gold)
        candidate_ids = np.asarray(candidate_ids)
        if scores.ndim != 2 or scores.shape != (gold.shape[0], candidate_ids.shape[0]):
            raise InvalidInput(
                f"scores shape {scores.shape} does not match "
                f"{gold.shape[0]} queries × {candidate_ids.shape[0]} candidates"
            )
        order = np.argsort(candidate_ids, kind="stable")
        pos = np.searchsorted(candidate_ids, gold, sorter=order)
        pos = np.minimum(pos, candidate_ids.shape[0] - 1)
        col = order[pos]
        if np.any(candidate_ids[col] != gold):
            raise MissingGold("a gold concept is not in the candidate set")

        gold_scores = scores[np.arange(gold.shape[0]), col][:, np.newaxis]
        higher = np.sum(scores > gold_scores, axis=1)
        tied_before = np.sum(
            (scores == gold_scores) & (candidate_ids[np.newaxis, :] < gold[:, np.newaxis]),
            axis=1,
        )
        return cls(ranks=1 + higher + tied_before, n_candidates=int(candidate_ids.shape[0]))

    @classmethod
    def from_orderings(cls, orderings: Sequence[Sequence[int]], gold: Sequence[int]) -> "RankedRun":
        """Build from explicit per-query candidate orderings (best first)."""
        if len(orderings) != len(gold):
            raise InvalidInput(f"{len(orderings)} orderings for {len(gold)} gold ids")
        if not orderings:
            return cls(ranks=np.zeros(0, dtype=int), n_candidates=0)
        reference = sorted(orderings[0])
        ranks = []
        for ordering, g in zip(orderings, gold):
            if sorted(ordering) != reference or len(set(ordering)) != len(ordering):
                raise InvalidInput("every ordering must be a permutation of the same candidate set")
            if g not in ordering:
                raise MissingGold(f"gold id {g} missing from a ranking")
            ranks.append(list(ordering).index(g) + 1)
        return cls(ranks=np.asarray(ranks), n_candidates=len(reference))


def _ranks(run: RankedRun) -> np.ndarray:
    if len(run) == 0:
        raise EmptyRun("ranking metrics need at least one query")
    return np.asarray(run.ranks, dtype=np.float64)


def _check_k(k: int) -> None:
    if k < 1:
        raise InvalidInput(f"cutoff k must be >= 1, got {k}")


def mrr(run: RankedRun) -> float:
    return float(np.mean(1.0 / _ranks(run)))


def recall_at_k(run: RankedRun, k: int) -> float:
    _check_k(k)
    return float(np.mean(_ranks(run) <= k))


def ndcg_at_k(run: RankedRun, k: int) -> float:
    """Binary single-gold NDCG: 1/log₂(1 + rank) inside the cutoff, IDCG = 1."""
    _check_k(k)
    ranks = _ranks(run)
    gains = np.where(ranks <= k, 1.0 / np.log2(1.0 + ranks), 0.0)
    return float(np.mean(gains))
