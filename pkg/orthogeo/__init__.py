"""
orthogeo — geometrically constrained low-rank adaptation.

ΔW = B Σ Aᵀ with A, B kept on Stiefel manifolds through a differentiable
reparameterization, a plain low-rank baseline, a synthetic hierarchical
retrieval benchmark and the analysis harnesses around them.
"""

__version__ = "1.0.0"
