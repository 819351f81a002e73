"""
AdapterEngine — Dynamic adapter instantiation via Auto-Discovery.

Single Responsibility: given a method key, resolve the concrete adapter
class and build (or restore) an instance.

Auto-discovery pattern::

    method ("orthogeo") → class name ("OrthoGeoAdapter")
        → CamelCase→snake_case → importlib → Adapter class

Usage::

    from orthogeo.services.adapters.engine import adapter_engine

    adapter = adapter_engine.create("orthogeo", w0, rank=8, alpha=16.0, rng=rng)
    again   = adapter_engine.restore("orthogeo", w0, 8, 16.0, adapter.tensors(), **adapter.options())
"""

from __future__ import annotations

import importlib
import logging
from typing import Any, Dict, List, Optional, Type

import numpy as np

from orthogeo.core.exceptions import InvalidInput
from orthogeo.services.adapters.base import BaseAdapter
from orthogeo.utils.naming import ADAPTER_PACKAGE, adapter_module_path

logger = logging.getLogger(__name__)

# Config method key → class name (the module file follows from the class name)
METHOD_CLASSES: Dict[str, str] = {
    "orthogeo": "OrthoGeoAdapter",
    "lora": "LoraAdapter",
}


class AdapterEngine:
    """
    Adapter resolver and factory.

    Classes are imported on first use and cached; adding an adapter kind
    means one file in ``services/adapters/types/`` plus its method key.
    """

    def __init__(self) -> None:
        self._class_cache: Dict[str, Type[BaseAdapter]] = {}

    @staticmethod
    def methods() -> List[str]:
        return list(METHOD_CLASSES)

    def resolve(self, method: str) -> Type[BaseAdapter]:
        """Return the adapter class for *method*, or raise InvalidInput."""
        if method in self._class_cache:
            return self._class_cache[method]

        class_name = METHOD_CLASSES.get(method)
        if class_name is None:
            raise InvalidInput(
                f"Unknown adapter method '{method}'. Use one of: {', '.join(METHOD_CLASSES)}"
            )
        cls = self._import_class(class_name)
        if cls is None:
            raise InvalidInput(f"Adapter class '{class_name}' not found in {ADAPTER_PACKAGE}")
        self._class_cache[method] = cls
        return cls

    def create(
        self,
        method: str,
        w0: np.ndarray,
        rank: int,
        alpha: float,
        rng: np.random.Generator,
        **options: Any,
    ) -> BaseAdapter:
        """Fresh adapter with the method's initialization."""
        cls = self.resolve(method)
        adapter = cls.initialize(w0, rank, alpha, rng, **options)
        logger.debug(
            "[AdapterEngine] Created %s (d_out=%d, d_in=%d, r=%d, params=%d)",
            cls.__name__, adapter.d_out, adapter.d_in, rank, adapter.param_count(),
        )
        return adapter

    def restore(
        self,
        method: str,
        w0: np.ndarray,
        rank: int,
        alpha: float,
        tensors: Dict[str, np.ndarray],
        **options: Any,
    ) -> BaseAdapter:
        """Adapter rebuilt from saved tensors."""
        return self.resolve(method).from_tensors(w0, rank, alpha, tensors, **options)

    # ── Private ──────────────────────────────────────────────

    @staticmethod
    def _import_class(class_name: str) -> Optional[Type[BaseAdapter]]:
        """
        Import a class from its snake_case module.

        ``OrthoGeoAdapter`` → ``orthogeo.services.adapters.types.ortho_geo_adapter``
        """
        full_path = adapter_module_path(class_name)
        try:
            module = importlib.import_module(full_path)
        except ImportError as exc:
            logger.error("[AdapterEngine] Cannot import %s: %s", full_path, exc)
            return None
        cls = getattr(module, class_name, None)
        if cls and isinstance(cls, type) and issubclass(cls, BaseAdapter):
            return cls
        logger.error(
            "[AdapterEngine] %s does not export '%s' as a BaseAdapter subclass",
            full_path, class_name,
        )
        return None


# ── Singleton ────────────────────────────────────────────────
adapter_engine = AdapterEngine()
