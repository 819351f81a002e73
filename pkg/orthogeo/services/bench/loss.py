"""In-batch InfoNCE over cosine scores."""

from __future__ import annotations

from typing import Tuple

import numpy as np

from orthogeo.core.exceptions import InvalidInput, MissingGold
from orthogeo.services.linalg import DenseMatrix


def infonce_loss(
    queries: DenseMatrix,
    candidates: DenseMatrix,
    gold: np.ndarray,
    tau: float,
) -> Tuple[float, DenseMatrix, DenseMatrix]:
    """
    Mean softmax cross-entropy of scores/τ, scores = queries · candidatesᵀ.

    Returns ``(loss, grad_queries, grad_candidates)``.  ``gold[i]`` is the
    row of ``candidates`` that query i should rank first.
    """
    q = np.asarray(queries, dtype=np.float64)
    c = np.asarray(candidates, dtype=np.float64)
    gold = np.asarray(gold)
    if not tau > 0.0:
        raise InvalidInput(f"temperature must be > 0, got {tau}")
    if q.ndim != 2 or c.ndim != 2 or q.shape[1] != c.shape[1]:
        raise InvalidInput(f"embedding shapes {q.shape} and {c.shape} are incompatible")
    n, m = q.shape[0], c.shape[0]
    if gold.shape != (n,):
        raise InvalidInput(f"expected {n} gold indices, got shape {gold.shape}")
    if n == 0:
        raise InvalidInput("empty batch")
    if np.any(gold < 0) or np.any(gold >= m):
        raise MissingGold(f"gold index outside the {m} in-batch candidates")

    logits = (q @ c.T) / tau
    shifted = logits - logits.max(axis=1, keepdims=True)
    log_z = np.log(np.exp(shifted).sum(axis=1))
    rows = np.arange(n)
    loss = float(np.mean(log_z - shifted[rows, gold]))

    probs = np.exp(shifted - log_z[:, np.newaxis])
    probs[rows, gold] -= 1.0
    d_logits = probs / (n * tau)
    return loss, d_logits @ c, d_logits.T @ q
