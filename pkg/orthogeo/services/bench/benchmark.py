"""
Benchmark assembly — taxonomy, dataset and frozen base weight for a RunConfig.

Everything here depends only on the data fields of the config
(``data_seed`` included), so runs that differ in method, rank or
training seed share the same task.
"""

from __future__ import annotations

from dataclasses import dataclass

from orthogeo.schemas.run_config import RunConfig
from orthogeo.services.adapters.base import BaseAdapter
from orthogeo.services.bench.dataset import RetrievalDataset, generate_descriptions
from orthogeo.services.bench.encoder import BiEncoder, base_weight
from orthogeo.services.bench.taxonomy import ConceptTree, generate_taxonomy
from orthogeo.services.linalg import DenseMatrix


@dataclass(frozen=True)
class Benchmark:
    tree: ConceptTree
    dataset: RetrievalDataset
    w0: DenseMatrix

    def encoder(self, adapter: BaseAdapter | None, temperature: float) -> BiEncoder:
        return BiEncoder(self.w0, adapter, temperature)


def build_benchmark(config: RunConfig) -> Benchmark:
    tree = generate_taxonomy(
        depth=config.depth,
        branching=config.branching,
        d_feat=config.d_feat,
        seed=config.data_seed,
        gamma=config.gamma,
    )
    dataset = generate_descriptions(
        tree,
        per_concept=config.per_concept,
        noise=config.noise,
        mix=config.mix,
        # distinct stream from the taxonomy draw
        seed=config.data_seed + 1,
    )
    w0 = base_weight(config.d_emb, config.d_feat, seed=config.data_seed + 2)
    return Benchmark(tree=tree, dataset=dataset, w0=w0)
