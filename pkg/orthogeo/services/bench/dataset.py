"""
RetrievalDataset — noisy descriptions of taxonomy concepts.

Each description is a unit vector near its concept's prototype, pulled
toward the parent concept and perturbed with seeded noise.  Every
concept gets the same number of descriptions and the same
train/val/test split sizes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Tuple

import numpy as np
import pandas as pd

from orthogeo.core.exceptions import InvalidInput
from orthogeo.services.bench.taxonomy import ConceptTree
from orthogeo.services.linalg import DenseMatrix, array_digest


class Split(str, Enum):
    TRAIN = "train"
    VAL = "val"
    TEST = "test"


# Smallest per-concept count that leaves at least one val and one test row.
MIN_PER_CONCEPT = 3


def split_sizes(per_concept: int) -> Tuple[int, int, int]:
    """
    train = min(⌈0.8n⌉, n − 2), val = max(⌊(n − train)/2⌋, 1), test = the rest.

    Val and test always get at least one row.
    """
    if per_concept < MIN_PER_CONCEPT:
        raise InvalidInput(f"per_concept must be >= {MIN_PER_CONCEPT}, got {per_concept}")
    train = min(math.ceil(0.8 * per_concept), per_concept - 2)
    val = max((per_concept - train) // 2, 1)
    return train, val, per_concept - train - val


@dataclass(frozen=True)
class SplitView:
    descriptions: DenseMatrix     # n × d_feat
    gold: np.ndarray              # n gold concept ids

    def __len__(self) -> int:
        return self.gold.shape[0]


@dataclass(frozen=True)
class RetrievalDataset:
    descriptions: DenseMatrix     # n × d_feat, unit rows
    gold: np.ndarray              # concept id per row
    split: np.ndarray             # Split value per row
    candidate_ids: np.ndarray     # every concept id, ascending
    candidate_features: DenseMatrix  # prototype row per candidate id
    per_concept: int

    def __len__(self) -> int:
        return self.gold.shape[0]

    def view(self, split: Split) -> SplitView:
        mask = self.split == Split(split).value
        return SplitView(self.descriptions[mask], self.gold[mask])

    def split_counts(self) -> Dict[str, int]:
        counts = pd.Series(self.split).value_counts()
        return {s.value: int(counts.get(s.value, 0)) for s in Split}

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"gold": self.gold, "split": self.split})

    def fingerprint(self) -> str:
        return array_digest(self.descriptions, self.gold.astype(np.float64))


def generate_descriptions(
    tree: ConceptTree,
    per_concept: int = 24,
    noise: float = 0.6,
    mix: float = 0.3,
    seed: int = 0,
) -> RetrievalDataset:
    """
    description = normalize((1 − mix)·prototype + mix·parent + noise·g/√d)

    with g a seeded standard Gaussian.  The root uses itself as parent.
    """
    if noise < 0.0:
        raise InvalidInput(f"noise must be >= 0, got {noise}")
    if not 0.0 <= mix <= 1.0:
        raise InvalidInput(f"mix must be in [0, 1], got {mix}")

    rng = np.random.default_rng(seed)
    d = tree.d_feat
    parents = tree.parent_ids()
    train_n, val_n, test_n = split_sizes(per_concept)
    split_pattern = np.array(
        [Split.TRAIN.value] * train_n + [Split.VAL.value] * val_n + [Split.TEST.value] * test_n
    )

    blocks, golds, splits = [], [], []
    for concept in tree.ids:
        center = (1.0 - mix) * tree.prototypes[concept] + mix * tree.prototypes[parents[concept]]
        raw = center[np.newaxis, :] + noise * rng.standard_normal((per_concept, d)) / np.sqrt(d)
        norms = np.linalg.norm(raw, axis=1, keepdims=True)
        if np.any(norms == 0.0):
            raise InvalidInput(f"zero description vector for concept {concept}")
        blocks.append(raw / norms)
        golds.append(np.full(per_concept, concept))
        splits.append(split_pattern)

    return RetrievalDataset(
        descriptions=np.vstack(blocks),
        gold=np.concatenate(golds),
        split=np.concatenate(splits),
        candidate_ids=tree.ids.copy(),
        candidate_features=tree.prototypes.copy(),
        per_concept=per_concept,
    )
