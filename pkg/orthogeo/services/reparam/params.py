"""
Parameter containers for the geometric reparameterization.

  - ``EuclideanParams``: the unconstrained trainables (Θ_A, Θ_B, s).
  - ``ManifoldFactors``:  (A, B, σ) after the maps, A and B on Stiefel.
  - ``ParamGrads``:       gradients w.r.t. the Euclidean parameters.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Dict

import numpy as np

from orthogeo.core.exceptions import InvalidInput
from orthogeo.services.linalg import DenseMatrix, DenseVector, array_digest


class SigmaMode(str, Enum):
    SOFTPLUS = "softplus"
    DIRECT = "direct"


class OrthMethod(str, Enum):
    HOUSEHOLDER = "householder"
    CAYLEY = "cayley"


class InitScheme(str, Enum):
    GAUSSIAN = "gaussian"
    KAIMING_UNIFORM = "kaiming_uniform"


# s at init: Direct starts at exactly zero (ΔW = 0), Softplus at −6 so σ ≈ 0.0025 + ε.
S_INIT = {SigmaMode.SOFTPLUS: -6.0, SigmaMode.DIRECT: 0.0}


@dataclass
class EuclideanParams:
    """Unconstrained parameters seen by the optimizer."""
    theta_a: DenseMatrix          # d_in × r
    theta_b: DenseMatrix          # d_out × r
    s: DenseVector                # r
    sigma_mode: SigmaMode = SigmaMode.SOFTPLUS
    epsilon: float = 1e-6
    orth_method: OrthMethod = OrthMethod.HOUSEHOLDER

    def __post_init__(self) -> None:
        self.sigma_mode = SigmaMode(self.sigma_mode)
        self.orth_method = OrthMethod(self.orth_method)
        d_in, r = self.theta_a.shape
        d_out, r_b = self.theta_b.shape
        if r_b != r or self.s.shape != (r,):
            raise InvalidInput(
                f"inconsistent ranks: theta_a {self.theta_a.shape}, "
                f"theta_b {self.theta_b.shape}, s {self.s.shape}"
            )
        if r > min(d_in, d_out):
            raise InvalidInput(f"rank {r} exceeds min(d_in, d_out) = {min(d_in, d_out)}")
        if self.sigma_mode is SigmaMode.SOFTPLUS and not self.epsilon > 0.0:
            raise InvalidInput("epsilon must be > 0 in softplus mode")

    # ── Shape helpers ──

    @property
    def rank(self) -> int:
        return self.s.shape[0]

    @property
    def d_in(self) -> int:
        return self.theta_a.shape[0]

    @property
    def d_out(self) -> int:
        return self.theta_b.shape[0]

    # ── Optimizer view ──

    def tensors(self) -> Dict[str, np.ndarray]:
        """Named arrays, shared with the optimizer (updated in place)."""
        return {"theta_a": self.theta_a, "theta_b": self.theta_b, "s": self.s}

    def fingerprint(self) -> str:
        """Digest of the current parameter bits."""
        return array_digest(self.theta_a, self.theta_b, self.s)

    def copy(self) -> "EuclideanParams":
        return EuclideanParams(
            theta_a=self.theta_a.copy(),
            theta_b=self.theta_b.copy(),
            s=self.s.copy(),
            sigma_mode=self.sigma_mode,
            epsilon=self.epsilon,
            orth_method=self.orth_method,
        )

    # ── Construction ──

    @classmethod
    def initialize(
        cls,
        d_in: int,
        d_out: int,
        rank: int,
        rng: np.random.Generator,
        sigma_mode: SigmaMode = SigmaMode.SOFTPLUS,
        epsilon: float = 1e-6,
        orth_method: OrthMethod = OrthMethod.HOUSEHOLDER,
        init_scheme: InitScheme = InitScheme.GAUSSIAN,
    ) -> "EuclideanParams":
        """Draw Θ_A then Θ_B from *rng*; s starts at the mode's init value."""
        sigma_mode = SigmaMode(sigma_mode)
        theta_a = _draw(rng, (d_in, rank), InitScheme(init_scheme))
        theta_b = _draw(rng, (d_out, rank), InitScheme(init_scheme))
        s = np.full(rank, S_INIT[sigma_mode])
        return cls(
            theta_a=theta_a,
            theta_b=theta_b,
            s=s,
            sigma_mode=sigma_mode,
            epsilon=epsilon,
            orth_method=orth_method,
        )


def _draw(rng: np.random.Generator, shape, scheme: InitScheme) -> np.ndarray:
    if scheme is InitScheme.KAIMING_UNIFORM:
        bound = np.sqrt(6.0 / shape[0])
        return rng.uniform(-bound, bound, size=shape)
    return rng.standard_normal(shape)


@dataclass(frozen=True)
class ManifoldFactors:
    """On-manifold factors: aᵀa = bᵀb = I_r."""
    a: DenseMatrix
    b: DenseMatrix
    sigma: DenseVector

    def delta(self) -> DenseMatrix:
        """Unscaled update B diag(σ) Aᵀ."""
        return (self.b * self.sigma[np.newaxis, :]) @ self.a.T


@dataclass
class ParamGrads:
    """Gradients matching the shapes of ``EuclideanParams``."""
    g_theta_a: DenseMatrix
    g_theta_b: DenseMatrix
    g_s: DenseVector

    def tensors(self) -> Dict[str, np.ndarray]:
        return {"theta_a": self.g_theta_a, "theta_b": self.g_theta_b, "s": self.g_s}
