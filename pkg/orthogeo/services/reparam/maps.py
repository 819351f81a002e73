"""
Differentiable maps from Euclidean space onto the constraint sets.

  orth_map   Θ ↦ A ∈ St(d, r)      (Householder QR, or Cayley)
  sigma_map  s ↦ σ                  (softplus(s) + ε, or identity)

Each map has a vector–Jacobian product used by the adapter backward pass.
"""

from __future__ import annotations

import numpy as np

from orthogeo.services.linalg import (
    DenseMatrix,
    DenseVector,
    cayley_stiefel,
    cayley_stiefel_vjp,
    thin_qr,
)
from orthogeo.services.reparam.params import OrthMethod, SigmaMode


# ── Orth map ─────────────────────────────────────────────────────

def orth_map(theta: DenseMatrix, method: OrthMethod = OrthMethod.HOUSEHOLDER) -> DenseMatrix:
    """Column-orthonormal factor for *theta*."""
    if OrthMethod(method) is OrthMethod.CAYLEY:
        return cayley_stiefel(theta)
    return thin_qr(theta).q


def orth_map_vjp(
    theta: DenseMatrix,
    grad_a: DenseMatrix,
    method: OrthMethod = OrthMethod.HOUSEHOLDER,
) -> DenseMatrix:
    """
    ∂L/∂Θ from ∂L/∂A, A = orth_map(Θ).

    QR branch: with Θ = QR, G = grad_a and K = QᵀG,
        ∂L/∂Θ = [(I − QQᵀ) G + Q · tril(K − Kᵀ, −1)] R⁻ᵀ
    (the strictly-lower part carries the skew component QᵀdQ).
    """
    if OrthMethod(method) is OrthMethod.CAYLEY:
        return cayley_stiefel_vjp(theta, grad_a)

    qr = thin_qr(theta)
    q, r = qr.q, qr.r_mat
    k = q.T @ grad_a
    inner = grad_a - q @ k + q @ np.tril(k - k.T, -1)
    # X R⁻ᵀ  ==  (R⁻¹ Xᵀ)ᵀ
    return np.linalg.solve(r, inner.T).T


# ── Sigma map ────────────────────────────────────────────────────

def sigma_map(s: DenseVector, mode: SigmaMode = SigmaMode.SOFTPLUS, epsilon: float = 1e-6) -> DenseVector:
    """σ = softplus(s) + ε in Softplus mode; σ = s in Direct mode."""
    if SigmaMode(mode) is SigmaMode.DIRECT:
        return np.array(s, dtype=np.float64, copy=True)
    # logaddexp(0, s) = log(1 + eˢ) without overflow for large |s|.
    return np.logaddexp(0.0, s) + epsilon


def sigma_map_vjp(
    s: DenseVector,
    mode: SigmaMode,
    epsilon: float,
    grad_sigma: DenseVector,
) -> DenseVector:
    """∂L/∂s = grad_sigma ⊙ sigmoid(s) (Softplus) or grad_sigma (Direct)."""
    if SigmaMode(mode) is SigmaMode.DIRECT:
        return np.array(grad_sigma, dtype=np.float64, copy=True)
    return grad_sigma * _sigmoid(s)


def _sigmoid(s: DenseVector) -> DenseVector:
    return np.exp(-np.logaddexp(0.0, -s))
