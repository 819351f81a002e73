"""
OrthoGeoAdapter — ΔW = B Σ Aᵀ with A, B on Stiefel manifolds.

Forward (staged, O(d_out·d_in) + O((d_in + d_out)·r) + O(r)):
    u  = Aᵀ x
    ũ  = σ ⊙ u
    Δy = B ũ
    y  = W₀ x + (α/r) Δy

Backward chains the bilinear-form gradients for (A, B, σ) through the
Orth and sigma maps back to (Θ_A, Θ_B, s).
"""

from __future__ import annotations

from typing import Any, Dict, Tuple

import numpy as np

from orthogeo.core.exceptions import InvalidInput
from orthogeo.services.adapters.base import AdapterCache, AdapterKind, BaseAdapter
from orthogeo.services.linalg import DenseMatrix
from orthogeo.services.reparam import (
    EuclideanParams,
    InitScheme,
    ManifoldFactors,
    OrthMethod,
    ParamGrads,
    SigmaMode,
    build_factors,
    orth_map_vjp,
    sigma_map_vjp,
)


class OrthoGeoAdapter(BaseAdapter):
    method = "orthogeo"
    label = "OrthoGeoLoRA"
    kind = AdapterKind.ORTHOGEO
    # Decaying s would pull softplus(s) toward ln 2, not toward zero.
    decay_exempt = frozenset({"s"})
    # Orth ignores the scale of Θ and softplus(s) ≈ eˢ at init: each has its own step size.
    lr_groups = {"theta_a": "theta", "theta_b": "theta", "s": "sigma"}

    def __init__(self, w0: DenseMatrix, params: EuclideanParams, alpha: float = 16.0) -> None:
        super().__init__(w0, alpha, params.rank)
        if params.d_in != self.d_in or params.d_out != self.d_out:
            raise InvalidInput(
                f"params ({params.d_out}×{params.d_in}) do not match w0 {self.w0.shape}"
            )
        self.params = params

    # ── Construction ─────────────────────────────────────────

    @classmethod
    def initialize(
        cls,
        w0: DenseMatrix,
        rank: int,
        alpha: float,
        rng: np.random.Generator,
        sigma_mode: SigmaMode = SigmaMode.SOFTPLUS,
        epsilon: float = 1e-6,
        orth_method: OrthMethod = OrthMethod.HOUSEHOLDER,
        init_scheme: InitScheme = InitScheme.GAUSSIAN,
        **_: Any,
    ) -> "OrthoGeoAdapter":
        d_out, d_in = np.shape(w0)
        params = EuclideanParams.initialize(
            d_in, d_out, rank, rng,
            sigma_mode=sigma_mode,
            epsilon=epsilon,
            orth_method=orth_method,
            init_scheme=init_scheme,
        )
        return cls(w0, params, alpha)

    @classmethod
    def from_tensors(
        cls,
        w0: DenseMatrix,
        rank: int,
        alpha: float,
        tensors: Dict[str, np.ndarray],
        sigma_mode: SigmaMode = SigmaMode.SOFTPLUS,
        epsilon: float = 1e-6,
        orth_method: OrthMethod = OrthMethod.HOUSEHOLDER,
        **_: Any,
    ) -> "OrthoGeoAdapter":
        params = EuclideanParams(
            theta_a=np.array(tensors["theta_a"], dtype=np.float64),
            theta_b=np.array(tensors["theta_b"], dtype=np.float64),
            s=np.array(tensors["s"], dtype=np.float64),
            sigma_mode=sigma_mode,
            epsilon=epsilon,
            orth_method=orth_method,
        )
        if params.rank != rank:
            raise InvalidInput(f"tensors have rank {params.rank}, expected {rank}")
        return cls(w0, params, alpha)

    def options(self) -> Dict[str, Any]:
        return {
            "sigma_mode": self.params.sigma_mode.value,
            "epsilon": self.params.epsilon,
            "orth_method": self.params.orth_method.value,
        }

    # ── State ────────────────────────────────────────────────

    def tensors(self) -> Dict[str, np.ndarray]:
        return self.params.tensors()

    def fingerprint(self) -> str:
        return self.params.fingerprint()

    def factors(self) -> ManifoldFactors:
        return build_factors(self.params)

    def delta(self) -> DenseMatrix:
        return self.scale * self.factors().delta()

    def scaled(self, c: float) -> "OrthoGeoAdapter":
        """Copy whose σ is multiplied by *c*; Θ_A and Θ_B are unchanged."""
        params = self.params.copy()
        if params.sigma_mode is SigmaMode.DIRECT:
            params.s = params.s * c
        else:
            target = c * self.factors().sigma - params.epsilon
            if np.any(target <= 0.0):
                raise InvalidInput("scaled σ must stay above epsilon in softplus mode")
            # softplus⁻¹(y) = y + log(1 − e⁻ʸ)
            params.s = target + np.log(-np.expm1(-target))
        return OrthoGeoAdapter(self.w0, params, self.alpha)

    # ── Forward / backward ───────────────────────────────────

    def forward(self, x: np.ndarray) -> Tuple[np.ndarray, AdapterCache]:
        cols, squeeze = self._as_columns(x)
        f = self.factors()
        u = f.a.T @ cols
        u_tilde = f.sigma[:, np.newaxis] * u
        delta_y = f.b @ u_tilde
        y = self.w0 @ cols + self.scale * delta_y
        cache = AdapterCache(
            fingerprint=self.fingerprint(),
            x=cols,
            values={"factors": f, "u": u, "u_tilde": u_tilde},
            squeeze=squeeze,
        )
        return self._restore_layout(y, squeeze), cache

    def backward(self, cache: AdapterCache, grad_y: np.ndarray) -> Dict[str, np.ndarray]:
        g = self._grad_columns(cache, grad_y)
        f: ManifoldFactors = cache.values["factors"]
        u = cache.values["u"]
        u_tilde = cache.values["u_tilde"]

        g_delta = self.scale * g
        g_b = g_delta @ u_tilde.T
        g_u_tilde = f.b.T @ g_delta
        g_sigma = np.sum(g_u_tilde * u, axis=1)
        g_u = f.sigma[:, np.newaxis] * g_u_tilde
        g_a = cache.x @ g_u.T
        return self._chain(g_a, g_b, g_sigma).tensors()

    def backward_delta(self, grad_delta: DenseMatrix) -> Dict[str, np.ndarray]:
        f = self.factors()
        g = self.scale * np.asarray(grad_delta, dtype=np.float64)
        g_times_a = g @ f.a
        g_b = g_times_a * f.sigma[np.newaxis, :]
        g_a = (g.T @ f.b) * f.sigma[np.newaxis, :]
        g_sigma = np.sum(f.b * g_times_a, axis=0)
        return self._chain(g_a, g_b, g_sigma).tensors()

    def _chain(self, g_a: DenseMatrix, g_b: DenseMatrix, g_sigma: np.ndarray) -> ParamGrads:
        p = self.params
        return ParamGrads(
            g_theta_a=orth_map_vjp(p.theta_a, g_a, p.orth_method),
            g_theta_b=orth_map_vjp(p.theta_b, g_b, p.orth_method),
            g_s=sigma_map_vjp(p.s, p.sigma_mode, p.epsilon, g_sigma),
        )

    # ── Spectrum ─────────────────────────────────────────────

    def delta_spectrum(self) -> np.ndarray:
        """
        Orthonormal factors make |σ|·|α/r| the exact spectrum of the update.

        A negative σ (Direct mode) is a positive singular value whose sign
        is absorbed into the matching column of B.
        """
        sigma = np.abs(self.factors().sigma) * abs(self.scale)
        return np.sort(sigma)[::-1]
