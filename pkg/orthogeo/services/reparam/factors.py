"""
Factor construction — step 1 of every training iteration.

Single Responsibility: turn ``EuclideanParams`` into ``ManifoldFactors``
through the differentiable maps.  Pure: identical inputs give identical bits.
"""

from __future__ import annotations

from orthogeo.core.exceptions import RankDeficient
from orthogeo.services.reparam.maps import orth_map, sigma_map
from orthogeo.services.reparam.params import EuclideanParams, ManifoldFactors


def build_factors(p: EuclideanParams) -> ManifoldFactors:
    """A = Orth(Θ_A), B = Orth(Θ_B), σ = sigma_map(s)."""
    try:
        a = orth_map(p.theta_a, p.orth_method)
    except RankDeficient as exc:
        raise exc.with_factor("theta_a") from exc
    try:
        b = orth_map(p.theta_b, p.orth_method)
    except RankDeficient as exc:
        raise exc.with_factor("theta_b") from exc
    sigma = sigma_map(p.s, p.sigma_mode, p.epsilon)
    return ManifoldFactors(a=a, b=b, sigma=sigma)
