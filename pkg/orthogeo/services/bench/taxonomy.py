"""
Synthetic concept taxonomy.

A complete ``branching``-ary tree of the given depth.  Ids are assigned
breadth-first (root = 0).  Each child prototype is its parent's
prototype plus seeded Gaussian jitter, re-normalized, so siblings share
most of their direction and the retrieval task gets harder with depth.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np
import pandas as pd

from orthogeo.core.exceptions import InvalidInput
from orthogeo.services.linalg import DenseMatrix, DenseVector


@dataclass(frozen=True)
class ConceptNode:
    id: int
    parent: Optional[int]
    depth: int


@dataclass(frozen=True)
class ConceptTree:
    nodes: List[ConceptNode]
    prototypes: DenseMatrix        # one unit-norm row per node, row i ↔ id i

    @property
    def size(self) -> int:
        return len(self.nodes)

    @property
    def d_feat(self) -> int:
        return self.prototypes.shape[1]

    @property
    def ids(self) -> np.ndarray:
        return np.arange(self.size)

    def prototype(self, node_id: int) -> DenseVector:
        return self.prototypes[node_id]

    def parent_ids(self) -> np.ndarray:
        """Parent id per node; the root is its own parent."""
        return np.array([n.id if n.parent is None else n.parent for n in self.nodes])

    def children(self) -> Dict[int, List[int]]:
        out: Dict[int, List[int]] = {n.id: [] for n in self.nodes}
        for n in self.nodes:
            if n.parent is not None:
                out[n.parent].append(n.id)
        return out

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "id": [n.id for n in self.nodes],
                "parent": pd.array([n.parent for n in self.nodes], dtype="Int64"),
                "depth": [n.depth for n in self.nodes],
            }
        )


def node_count(depth: int, branching: int) -> int:
    """Σ_{l=0..depth} branching^l."""
    return sum(branching ** level for level in range(depth + 1))


def generate_taxonomy(
    depth: int,
    branching: int,
    d_feat: int,
    seed: int,
    gamma: float = 0.5,
) -> ConceptTree:
    if depth < 1:
        raise InvalidInput(f"depth must be >= 1, got {depth}")
    if branching < 2:
        raise InvalidInput(f"branching must be >= 2, got {branching}")
    if d_feat < 1:
        raise InvalidInput(f"d_feat must be >= 1, got {d_feat}")
    if gamma < 0.0:
        raise InvalidInput(f"gamma must be >= 0, got {gamma}")

    rng = np.random.default_rng(seed)
    n = node_count(depth, branching)
    prototypes = np.empty((n, d_feat))
    nodes: List[ConceptNode] = [ConceptNode(0, None, 0)]
    prototypes[0] = _unit(rng.standard_normal(d_feat))

    frontier = [0]
    next_id = 1
    for level in range(1, depth + 1):
        children = []
        for parent in frontier:
            for _ in range(branching):
                jitter = gamma * rng.standard_normal(d_feat) / np.sqrt(d_feat)
                prototypes[next_id] = _unit(prototypes[parent] + jitter)
                nodes.append(ConceptNode(next_id, parent, level))
                children.append(next_id)
                next_id += 1
        frontier = children

    return ConceptTree(nodes=nodes, prototypes=prototypes)


def _unit(v: np.ndarray) -> np.ndarray:
    norm = np.linalg.norm(v)
    if norm == 0.0:
        raise InvalidInput("prototype draw produced a zero vector")
    return v / norm
