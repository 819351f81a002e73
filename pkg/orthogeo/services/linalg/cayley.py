"""
Cayley transform: skew-symmetric X ↦ orthogonal Q = (I − X)(I + X)⁻¹.

Also provides the Stiefel variant used as an alternate Orth map: a d×r
parameter Θ generates X = [Θ | 0] − [Θ | 0]ᵀ and the first r columns of
cayley(X) lie on St(d, r).
"""

from __future__ import annotations

import numpy as np

from orthogeo.core.exceptions import InvalidInput, InvalidSkew, SingularCayley
from orthogeo.services.linalg.kernels import DenseMatrix, frobenius

SKEW_TOLERANCE = 1e-12


def cayley(x: DenseMatrix) -> DenseMatrix:
    """Orthogonal matrix for a skew-symmetric *x*."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] != x.shape[1]:
        raise InvalidInput(f"cayley expects a square matrix, got {x.shape}")
    if frobenius(x + x.T) > SKEW_TOLERANCE:
        raise InvalidSkew(f"‖X + Xᵀ‖_F = {frobenius(x + x.T):.3e} exceeds {SKEW_TOLERANCE}")
    return _cayley_unchecked(x)


def _cayley_unchecked(x: DenseMatrix) -> DenseMatrix:
    eye = np.eye(x.shape[0])
    # (I − X) and (I + X)⁻¹ commute, so Q = (I + X)⁻¹ (I − X).
    try:
        q = np.linalg.solve(eye + x, eye - x)
    except np.linalg.LinAlgError as exc:
        raise SingularCayley(f"(I + X) is singular: {exc}") from exc
    if not np.all(np.isfinite(q)):
        raise SingularCayley("(I + X) is numerically singular")
    return q


# ── Stiefel parameterization ─────────────────────────────────────

def _generator(theta: DenseMatrix) -> DenseMatrix:
    d, r = theta.shape
    w = np.zeros((d, d))
    w[:, :r] = theta
    return w - w.T


def cayley_stiefel(theta: DenseMatrix) -> DenseMatrix:
    """First r columns of cayley([Θ | 0] − [Θ | 0]ᵀ)."""
    theta = np.asarray(theta, dtype=np.float64)
    d, r = theta.shape
    if d < r:
        raise InvalidInput(f"cayley_stiefel needs rows >= cols, got {theta.shape}")
    return _cayley_unchecked(_generator(theta))[:, :r]


def cayley_stiefel_vjp(theta: DenseMatrix, grad_a: DenseMatrix) -> DenseMatrix:
    """
    Pull ∂L/∂A back to ∂L/∂Θ for A = cayley_stiefel(Θ).

    With M = (I + X)⁻¹ and Q = M(I − X):  dQ = −M dX (Q + I),
    so ∂L/∂X = −Mᵀ G (Q + I)ᵀ where G is grad_a padded to d×d.
    """
    theta = np.asarray(theta, dtype=np.float64)
    d, r = theta.shape
    x = _generator(theta)
    eye = np.eye(d)
    q = _cayley_unchecked(x)

    g = np.zeros((d, d))
    g[:, :r] = grad_a
    # Mᵀ Y = solve((I + X)ᵀ, Y)
    g_x = -np.linalg.solve((eye + x).T, g @ (q + eye).T)
    g_w = g_x - g_x.T
    return g_w[:, :r]
