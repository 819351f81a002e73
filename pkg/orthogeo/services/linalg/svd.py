"""
One-sided (Hestenes) Jacobi SVD for small dense matrices.

Used as the Eckart–Young oracle and for extracting update spectra.
Rotations orthogonalize the columns of a working copy of the input;
the column norms are the singular values.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from orthogeo.core.exceptions import SizeLimitExceeded
from orthogeo.services.linalg.kernels import DenseMatrix, DenseVector

MAX_DIM = 2048
_MAX_SWEEPS = 60
_EPS = np.finfo(np.float64).eps


@dataclass(frozen=True)
class SvdResult:
    """m = u · diag(s) · vᵀ, s descending and non-negative, k = min(m, n)."""
    u: DenseMatrix
    s: DenseVector
    v: DenseMatrix


def svd_jacobi(m: DenseMatrix) -> SvdResult:
    """Thin SVD of *m*; wide inputs are handled through the transpose."""
    m = np.asarray(m, dtype=np.float64)
    if max(m.shape) > MAX_DIM:
        raise SizeLimitExceeded(f"svd_jacobi supports dims <= {MAX_DIM}, got {m.shape}")

    if m.shape[0] < m.shape[1]:
        res = _svd_tall(m.T)
        return SvdResult(u=res.v, s=res.s, v=res.u)
    return _svd_tall(m)


def _svd_tall(a: DenseMatrix) -> SvdResult:
    rows, cols = a.shape
    work = a.copy()
    v = np.eye(cols)

    for _sweep in range(_MAX_SWEEPS):
        rotated = False
        for p in range(cols - 1):
            for q in range(p + 1, cols):
                wp = work[:, p]
                wq = work[:, q]
                alpha = wp @ wp
                beta = wq @ wq
                gamma = wp @ wq
                if gamma == 0.0 or abs(gamma) <= _EPS * np.sqrt(alpha * beta):
                    continue
                rotated = True
                zeta = (beta - alpha) / (2.0 * gamma)
                t = np.copysign(1.0, zeta) / (abs(zeta) + np.sqrt(1.0 + zeta * zeta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = c * t
                work_p = work[:, p].copy()
                work[:, p] = c * work_p - s * work[:, q]
                work[:, q] = s * work_p + c * work[:, q]
                v_p = v[:, p].copy()
                v[:, p] = c * v_p - s * v[:, q]
                v[:, q] = s * v_p + c * v[:, q]
        if not rotated:
            break

    sigma = np.linalg.norm(work, axis=0)
    # Stable sort keeps equal singular values in column order.
    order = np.argsort(-sigma, kind="stable")
    sigma = sigma[order]
    work = work[:, order]
    v = v[:, order]

    u = np.zeros((rows, cols))
    cutoff = _EPS * max(rows, cols) * (sigma[0] if sigma.size else 0.0)
    nonzero = sigma > cutoff
    u[:, nonzero] = work[:, nonzero] / sigma[nonzero]
    sigma = np.where(nonzero, sigma, 0.0)
    if not nonzero.all():
        u = _complete_basis(u, nonzero)

    return SvdResult(u=u, s=sigma, v=v)


def _complete_basis(u: DenseMatrix, filled: np.ndarray) -> DenseMatrix:
    """Fill the columns of *u* marked False with an orthonormal complement."""
    rows = u.shape[0]
    basis = [u[:, j] for j in np.flatnonzero(filled)]
    out = u.copy()
    candidates = iter(np.eye(rows))
    for j in np.flatnonzero(~filled):
        for e in candidates:
            w = e.copy()
            for _ in range(2):  # two Gram–Schmidt passes
                for b in basis:
                    w -= (b @ w) * b
            norm = np.linalg.norm(w)
            if norm > 1e-8:
                w /= norm
                out[:, j] = w
                basis.append(w)
                break
    return out
