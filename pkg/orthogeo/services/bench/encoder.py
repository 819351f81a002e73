"""
BiEncoder — frozen linear encoder with one optionally adapted layer.

Descriptions and concept prototypes go through the same weights
(shared-weight bi-encoder); outputs are L2-normalized rows.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from orthogeo.core.exceptions import DegenerateEncoder, InvalidInput
from orthogeo.services.adapters.base import AdapterCache, BaseAdapter
from orthogeo.services.linalg import DenseMatrix, DenseVector


def base_weight(d_emb: int, d_feat: int, seed: int) -> DenseMatrix:
    """Frozen W₀ ~ N(0, 1)/√d_feat."""
    rng = np.random.default_rng(seed)
    return rng.standard_normal((d_emb, d_feat)) / np.sqrt(d_feat)


@dataclass(frozen=True)
class EncoderCache:
    adapter_cache: Optional[AdapterCache]
    embeddings: DenseMatrix       # n × d_emb, unit rows
    norms: np.ndarray             # n pre-normalization norms


class BiEncoder:
    def __init__(
        self,
        w0: DenseMatrix,
        adapter: Optional[BaseAdapter] = None,
        temperature: float = 0.05,
    ) -> None:
        w0 = np.asarray(w0, dtype=np.float64)
        if w0.ndim != 2:
            raise InvalidInput(f"w0 must be 2-D, got shape {w0.shape}")
        if not temperature > 0.0:
            raise InvalidInput(f"temperature must be > 0, got {temperature}")
        if adapter is not None and not np.array_equal(adapter.w0, w0):
            raise InvalidInput("adapter was built on a different base weight")
        self.w0 = w0
        self.adapter = adapter
        self.temperature = float(temperature)

    @property
    def d_feat(self) -> int:
        return self.w0.shape[1]

    @property
    def d_emb(self) -> int:
        return self.w0.shape[0]

    def without_adapter(self) -> "BiEncoder":
        return BiEncoder(self.w0, None, self.temperature)

    # ── Inference ────────────────────────────────────────────

    def encode(self, x: DenseVector) -> DenseVector:
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.d_feat,):
            raise InvalidInput(f"input has shape {x.shape}, expected ({self.d_feat},)")
        return self.encode_batch(x[np.newaxis, :])[0]

    def encode_batch(self, rows: DenseMatrix) -> DenseMatrix:
        return self.forward(rows)[0]

    # ── Training ─────────────────────────────────────────────

    def forward(self, rows: DenseMatrix) -> Tuple[DenseMatrix, EncoderCache]:
        rows = np.asarray(rows, dtype=np.float64)
        if rows.ndim != 2 or rows.shape[1] != self.d_feat:
            raise InvalidInput(f"inputs have shape {rows.shape}, expected (n, {self.d_feat})")
        cols = rows.T
        if self.adapter is None:
            y, adapter_cache = self.w0 @ cols, None
        else:
            y, adapter_cache = self.adapter.forward(cols)
        norms = np.linalg.norm(y, axis=0)
        if np.any(norms == 0.0) or not np.all(np.isfinite(norms)):
            raise DegenerateEncoder("encoder output cannot be normalized (zero or non-finite norm)")
        emb = (y / norms[np.newaxis, :]).T
        return emb, EncoderCache(adapter_cache, emb, norms)

    def backward(self, cache: EncoderCache, grad_emb: DenseMatrix) -> Dict[str, np.ndarray]:
        """Adapter gradients for a loss on the normalized embeddings."""
        if self.adapter is None or cache.adapter_cache is None:
            raise InvalidInput("backward needs an adapted encoder")
        e = cache.embeddings
        g = np.asarray(grad_emb, dtype=np.float64)
        if g.shape != e.shape:
            raise InvalidInput(f"grad has shape {g.shape}, expected {e.shape}")
        # d(y/‖y‖): (g − e⟨e, g⟩)/‖y‖
        radial = np.sum(e * g, axis=1, keepdims=True)
        g_y = (g - e * radial) / cache.norms[:, np.newaxis]
        return self.adapter.backward(cache.adapter_cache, g_y.T)
