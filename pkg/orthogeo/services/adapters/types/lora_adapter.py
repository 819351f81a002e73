"""
LoraAdapter — plain low-rank baseline, ΔW = B Aᵀ.

A ~ N(0, 1/d_in), B = 0, so the update starts at exactly zero.  The
α/r scaling matches OrthoGeoAdapter for a like-for-like comparison.
"""

from __future__ import annotations

from typing import Any, Dict, Tuple

import numpy as np

from orthogeo.core.exceptions import InvalidInput
from orthogeo.services.adapters.base import AdapterCache, AdapterKind, BaseAdapter
from orthogeo.services.linalg import DenseMatrix, array_digest, svd_jacobi


class LoraAdapter(BaseAdapter):
    method = "lora"
    label = "LoRA"
    kind = AdapterKind.LORA
    decay_exempt = frozenset()

    def __init__(self, w0: DenseMatrix, a: DenseMatrix, b: DenseMatrix, alpha: float = 16.0) -> None:
        a = np.asarray(a, dtype=np.float64)
        b = np.asarray(b, dtype=np.float64)
        super().__init__(w0, alpha, a.shape[1])
        if a.shape != (self.d_in, self.rank) or b.shape != (self.d_out, self.rank):
            raise InvalidInput(
                f"factor shapes a {a.shape}, b {b.shape} do not match w0 {self.w0.shape}"
            )
        self.a = a
        self.b = b

    # ── Construction ─────────────────────────────────────────

    @classmethod
    def initialize(
        cls,
        w0: DenseMatrix,
        rank: int,
        alpha: float,
        rng: np.random.Generator,
        **_: Any,
    ) -> "LoraAdapter":
        d_out, d_in = np.shape(w0)
        a = rng.normal(0.0, 1.0 / np.sqrt(d_in), size=(d_in, rank))
        b = np.zeros((d_out, rank))
        return cls(w0, a, b, alpha)

    @classmethod
    def from_tensors(
        cls,
        w0: DenseMatrix,
        rank: int,
        alpha: float,
        tensors: Dict[str, np.ndarray],
        **_: Any,
    ) -> "LoraAdapter":
        adapter = cls(
            w0,
            np.array(tensors["a"], dtype=np.float64),
            np.array(tensors["b"], dtype=np.float64),
            alpha,
        )
        if adapter.rank != rank:
            raise InvalidInput(f"tensors have rank {adapter.rank}, expected {rank}")
        return adapter

    def options(self) -> Dict[str, Any]:
        return {}

    # ── State ────────────────────────────────────────────────

    def tensors(self) -> Dict[str, np.ndarray]:
        return {"a": self.a, "b": self.b}

    def fingerprint(self) -> str:
        return array_digest(self.a, self.b)

    def delta(self) -> DenseMatrix:
        return self.scale * (self.b @ self.a.T)

    def gauge_transform(self, m: DenseMatrix) -> "LoraAdapter":
        """(B, A) → (B M, A M⁻ᵀ): a different factorization of the same ΔW."""
        m = np.asarray(m, dtype=np.float64)
        a_new = np.linalg.solve(m, self.a.T).T  # A M⁻ᵀ
        return LoraAdapter(self.w0, a_new, self.b @ m, self.alpha)

    # ── Forward / backward ───────────────────────────────────

    def forward(self, x: np.ndarray) -> Tuple[np.ndarray, AdapterCache]:
        cols, squeeze = self._as_columns(x)
        u = self.a.T @ cols
        y = self.w0 @ cols + self.scale * (self.b @ u)
        cache = AdapterCache(
            fingerprint=self.fingerprint(),
            x=cols,
            values={"u": u, "b": self.b.copy()},
            squeeze=squeeze,
        )
        return self._restore_layout(y, squeeze), cache

    def backward(self, cache: AdapterCache, grad_y: np.ndarray) -> Dict[str, np.ndarray]:
        g = self._grad_columns(cache, grad_y)
        g_delta = self.scale * g
        g_b = g_delta @ cache.values["u"].T
        g_u = cache.values["b"].T @ g_delta
        g_a = cache.x @ g_u.T
        return {"a": g_a, "b": g_b}

    def backward_delta(self, grad_delta: DenseMatrix) -> Dict[str, np.ndarray]:
        g = self.scale * np.asarray(grad_delta, dtype=np.float64)
        return {"a": g.T @ self.b, "b": g @ self.a}

    # ── Spectrum ─────────────────────────────────────────────

    def delta_spectrum(self) -> np.ndarray:
        """Top-r singular values of (α/r)·B Aᵀ from the Jacobi SVD."""
        return svd_jacobi(self.delta()).s[: self.rank].copy()
