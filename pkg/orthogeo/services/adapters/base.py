"""
BaseAdapter — Abstract base class for low-rank adapter layers.

Single Responsibility: define the contract every adapter follows.
Adapters are self-describing via class attributes, no external registry::

    RunConfig.method = "orthogeo"
        ↓  AdapterEngine: METHOD_CLASSES → "OrthoGeoAdapter"
    ortho_geo_adapter.py
        ↓  importlib
    class OrthoGeoAdapter(BaseAdapter):
        method = "orthogeo"
        label  = "OrthoGeoLoRA"
        ...

An adapter wraps a frozen base weight W₀ (d_out × d_in) and adds
(α/r)·ΔW.  Inputs are single vectors (d_in,) or batches of column
vectors (d_in × n); outputs keep the input's layout.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import Any, ClassVar, Dict, FrozenSet, Mapping, Tuple

import numpy as np

from orthogeo.core.exceptions import InvalidInput, StaleCache
from orthogeo.services.linalg import DenseMatrix


class AdapterKind(str, Enum):
    FULL = "full"
    LORA = "lora"
    ORTHOGEO = "orthogeo"


def param_count(kind: AdapterKind, d_in: int, d_out: int, r: int) -> int:
    """
    Trainable parameter count.

      Full      d_out · d_in
      Lora      d_in · r + d_out · r
      OrthoGeo  d_in · r + d_out · r + r
    """
    kind = AdapterKind(kind)
    if d_in < 1 or d_out < 1:
        raise InvalidInput(f"dimensions must be positive, got d_in={d_in}, d_out={d_out}")
    if kind is AdapterKind.FULL:
        return d_out * d_in
    if r < 0 or r > min(d_in, d_out):
        raise InvalidInput(f"rank {r} outside [0, {min(d_in, d_out)}]")
    lora = d_in * r + d_out * r
    if kind is AdapterKind.LORA:
        return lora
    return lora + r


# ─────────────────────────────────────────────────────────────
#  DATA CLASSES
# ─────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class FoldedWeight:
    """W_eff = W₀ + (α/r)·ΔW — inference without the adapter path."""
    w_eff: DenseMatrix

    def forward(self, x: np.ndarray) -> np.ndarray:
        return self.w_eff @ x


@dataclass(frozen=True)
class AdapterCache:
    """
    Intermediates stored by ``forward`` for ``backward``.

    ``fingerprint`` ties the cache to the parameter bits it was built
    from; ``values`` holds the method-specific tensors.
    """
    fingerprint: str
    x: DenseMatrix
    values: Dict[str, Any]
    squeeze: bool


# ─────────────────────────────────────────────────────────────
#  ABSTRACT BASE
# ─────────────────────────────────────────────────────────────

class BaseAdapter(ABC):
    """
    Abstract base for every adapter kind.

    Class attributes (override in each concrete adapter):
      method        : config key ("orthogeo" | "lora").
      label         : display name used in reports.
      kind          : AdapterKind for parameter counting.
      decay_exempt  : tensor names the optimizer must not weight-decay.
      lr_groups     : tensor name → learning-rate group (see ``lr_scales``).

    Subclasses **must** implement:
      - ``tensors()``            → named trainable arrays (shared, mutable)
      - ``delta()``              → scaled update (α/r)·ΔW
      - ``forward(x)``           → (y, cache)
      - ``backward(cache, g)``   → named gradients
      - ``backward_delta(g_w)``  → named gradients for a loss on ΔW itself
      - ``delta_spectrum()``     → top-r singular values of the scaled update
      - ``options()``            → hyperparameters needed to rebuild the adapter
      - ``initialize(...)``      → classmethod, fresh adapter
    """

    method:       ClassVar[str] = ""
    label:        ClassVar[str] = ""
    kind:         ClassVar[AdapterKind] = AdapterKind.LORA
    decay_exempt: ClassVar[FrozenSet[str]] = frozenset()
    lr_groups:    ClassVar[Mapping[str, str]] = {}

    def __init__(self, w0: DenseMatrix, alpha: float, rank: int) -> None:
        w0 = np.array(w0, dtype=np.float64, copy=True)
        if w0.ndim != 2:
            raise InvalidInput(f"w0 must be 2-D, got shape {w0.shape}")
        if not alpha > 0.0:
            raise InvalidInput(f"alpha must be > 0, got {alpha}")
        if rank < 1 or rank > min(w0.shape):
            raise InvalidInput(f"rank {rank} outside [1, {min(w0.shape)}]")
        w0.setflags(write=False)  # frozen base weight
        self.w0 = w0
        self.alpha = float(alpha)
        self.rank = int(rank)

    # ── Shape helpers ──

    @property
    def d_in(self) -> int:
        return self.w0.shape[1]

    @property
    def d_out(self) -> int:
        return self.w0.shape[0]

    @property
    def scale(self) -> float:
        return self.alpha / self.rank

    def lr_scales(self, group_scales: Mapping[str, float]) -> Dict[str, float]:
        """Per-tensor learning-rate multipliers; groups missing from *group_scales* get 1."""
        return {name: float(group_scales.get(group, 1.0)) for name, group in self.lr_groups.items()}

    # ── Contract ──

    @abstractmethod
    def tensors(self) -> Dict[str, np.ndarray]:
        ...

    @abstractmethod
    def fingerprint(self) -> str:
        ...

    @abstractmethod
    def delta(self) -> DenseMatrix:
        ...

    @abstractmethod
    def forward(self, x: np.ndarray) -> Tuple[np.ndarray, AdapterCache]:
        ...

    @abstractmethod
    def backward(self, cache: AdapterCache, grad_y: np.ndarray) -> Dict[str, np.ndarray]:
        ...

    @abstractmethod
    def backward_delta(self, grad_delta: DenseMatrix) -> Dict[str, np.ndarray]:
        ...

    @abstractmethod
    def delta_spectrum(self) -> np.ndarray:
        ...

    @abstractmethod
    def options(self) -> Dict[str, Any]:
        ...

    @classmethod
    @abstractmethod
    def initialize(
        cls,
        w0: DenseMatrix,
        rank: int,
        alpha: float,
        rng: np.random.Generator,
        **options: Any,
    ) -> "BaseAdapter":
        ...

    @classmethod
    @abstractmethod
    def from_tensors(
        cls,
        w0: DenseMatrix,
        rank: int,
        alpha: float,
        tensors: Dict[str, np.ndarray],
        **options: Any,
    ) -> "BaseAdapter":
        ...

    # ── Shared behaviour ──

    def fold(self) -> FoldedWeight:
        """Precompute W₀ + (α/r)·ΔW."""
        return FoldedWeight(w_eff=self.w0 + self.delta())

    def param_count(self) -> int:
        return param_count(self.kind, self.d_in, self.d_out, self.rank)

    def is_zero_update(self) -> bool:
        return not np.any(self.delta())

    # ── Helpers for subclasses ──

    def _as_columns(self, x: np.ndarray) -> Tuple[DenseMatrix, bool]:
        x = np.asarray(x, dtype=np.float64)
        squeeze = x.ndim == 1
        cols = x[:, np.newaxis] if squeeze else x
        if cols.ndim != 2 or cols.shape[0] != self.d_in:
            raise InvalidInput(
                f"{type(self).__name__}: input has shape {x.shape}, expected leading dim {self.d_in}"
            )
        return cols, squeeze

    def _grad_columns(self, cache: AdapterCache, grad_y: np.ndarray) -> DenseMatrix:
        if cache.fingerprint != self.fingerprint():
            raise StaleCache(
                f"{type(self).__name__}: cache was built from different parameters"
            )
        g = np.asarray(grad_y, dtype=np.float64)
        g = g[:, np.newaxis] if cache.squeeze else g
        if g.shape != (self.d_out, cache.x.shape[1]):
            raise StaleCache(
                f"{type(self).__name__}: grad_y shape {np.shape(grad_y)} does not match the cached forward"
            )
        return g

    @staticmethod
    def _restore_layout(y: DenseMatrix, squeeze: bool) -> np.ndarray:
        return y[:, 0] if squeeze else y
