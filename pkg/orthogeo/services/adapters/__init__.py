"""Adapter layers — OrthoGeoLoRA, the LoRA baseline, folding and counting."""

from orthogeo.services.adapters.base import (
    AdapterCache,
    AdapterKind,
    BaseAdapter,
    FoldedWeight,
    param_count,
)
from orthogeo.services.adapters.engine import adapter_engine

__all__ = [
    "AdapterCache",
    "AdapterKind",
    "BaseAdapter",
    "FoldedWeight",
    "adapter_engine",
    "param_count",
]
