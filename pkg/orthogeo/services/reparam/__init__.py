"""Geometric reparameterization — Euclidean parameters onto Stiefel factors."""

from orthogeo.services.reparam.factors import build_factors
from orthogeo.services.reparam.maps import orth_map, orth_map_vjp, sigma_map, sigma_map_vjp
from orthogeo.services.reparam.params import (
    EuclideanParams,
    InitScheme,
    ManifoldFactors,
    OrthMethod,
    ParamGrads,
    SigmaMode,
)

__all__ = [
    "EuclideanParams",
    "InitScheme",
    "ManifoldFactors",
    "OrthMethod",
    "ParamGrads",
    "SigmaMode",
    "build_factors",
    "orth_map",
    "orth_map_vjp",
    "sigma_map",
    "sigma_map_vjp",
]
