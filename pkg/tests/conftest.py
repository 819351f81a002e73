"""
Pytest fixtures shared across all tests.

Provides:
  - rng:              seeded numpy Generator
  - make_config:      factory for tiny RunConfigs with overrides
  - tiny_config:      RunConfig small enough to train in well under a second
  - tiny_flags:       the same config as CLI flags
  - micro_benchmark:  10-concept benchmark with the tiny encoder sizes
"""

from __future__ import annotations

from typing import Any, Dict, List

import numpy as np
import pytest

from orthogeo.schemas.run_config import RunConfig
from orthogeo.services.bench.benchmark import build_benchmark

# 13 concepts, d = 12, 10 descriptions each (8/1/1 split); plain Adam steps for every tensor
TINY: Dict[str, Any] = {
    "depth": 2,
    "branching": 3,
    "d_feat": 12,
    "d_emb": 12,
    "rank": 3,
    "per_concept": 10,
    "batch_size": 32,
    "lr": 1e-2,
    "max_steps": 30,
    "eval_interval": 10,
    "stiefel_interval": 10,
    "patience": 100,
    "theta_lr_scale": 1.0,
    "sigma_lr_scale": 1.0,
}


def tiny_run_config(**overrides: Any) -> RunConfig:
    return RunConfig(**{**TINY, **overrides})


def as_flags(values: Dict[str, Any]) -> List[str]:
    flags: List[str] = []
    for key, value in values.items():
        flags += [f"--{key.replace('_', '-')}", str(value)]
    return flags


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def make_config():
    """Factory: tiny RunConfig with keyword overrides."""
    return tiny_run_config


@pytest.fixture
def tiny_config():
    return tiny_run_config()


@pytest.fixture
def tiny_flags():
    return as_flags(TINY)


@pytest.fixture
def micro_benchmark():
    """depth 1, branching 9 → 10 concepts."""
    return build_benchmark(tiny_run_config(depth=1, branching=9))
