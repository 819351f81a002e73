"""MetricsReport — ranking metrics for one encoder on one split."""

from __future__ import annotations

from typing import Dict, List

from pydantic import BaseModel, Field, model_validator


class MetricsReport(BaseModel):
    method:    str
    split:     str
    n_queries: int = Field(..., ge=1)
    mrr:       float = Field(..., ge=0.0, le=1.0)
    recall_at: Dict[int, float]
    ndcg_at:   Dict[int, float]

    @model_validator(mode="after")
    def _consistent_cutoffs(self) -> "MetricsReport":
        if sorted(self.recall_at) != sorted(self.ndcg_at):
            raise ValueError("recall_at and ndcg_at must share the same cutoffs")
        return self

    @property
    def ks(self) -> List[int]:
        return sorted(self.recall_at)

    def to_row(self) -> Dict[str, object]:
        """Results row: Method, MRR, Recall@k…, NDCG@k…"""
        row: Dict[str, object] = {"Method": self.method, "MRR": self.mrr}
        for k in self.ks:
            row[f"Recall@{k}"] = self.recall_at[k]
        for k in self.ks:
            row[f"NDCG@{k}"] = self.ndcg_at[k]
        return row
