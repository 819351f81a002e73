"""
Synthetic hierarchical retrieval benchmark — taxonomy, descriptions, encoder, loss.

The training loop lives in ``orthogeo.services.bench.trainer`` (it depends
on the metrics package, which in turn depends on the names below).
"""

from orthogeo.services.bench.benchmark import Benchmark, build_benchmark
from orthogeo.services.bench.dataset import RetrievalDataset, Split, generate_descriptions, split_sizes
from orthogeo.services.bench.encoder import BiEncoder, base_weight
from orthogeo.services.bench.loss import infonce_loss
from orthogeo.services.bench.taxonomy import ConceptTree, generate_taxonomy, node_count

__all__ = [
    "Benchmark",
    "BiEncoder",
    "ConceptTree",
    "RetrievalDataset",
    "Split",
    "base_weight",
    "build_benchmark",
    "generate_descriptions",
    "generate_taxonomy",
    "infonce_loss",
    "node_count",
    "split_sizes",
]
