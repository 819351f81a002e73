"""
Dense float64 kernels.

Single Responsibility: validation and the small products/norms every
other module builds on.  DenseMatrix is a 2-D ``np.ndarray`` and
DenseVector a 1-D one, both float64.
"""

from __future__ import annotations

import hashlib

import numpy as np

from orthogeo.core.exceptions import InvalidInput

DenseMatrix = np.ndarray
DenseVector = np.ndarray


# ── Construction / validation ────────────────────────────────────

def as_matrix(data, name: str = "matrix") -> DenseMatrix:
    """Return *data* as a finite 2-D float64 array, or raise InvalidInput."""
    arr = np.asarray(data, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise InvalidInput(f"{name}: expected a non-empty 2-D array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInput(f"{name}: contains NaN or Inf")
    return arr


def as_vector(data, name: str = "vector") -> DenseVector:
    """Return *data* as a finite 1-D float64 array, or raise InvalidInput."""
    arr = np.asarray(data, dtype=np.float64)
    if arr.ndim != 1:
        raise InvalidInput(f"{name}: expected a 1-D array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInput(f"{name}: contains NaN or Inf")
    return arr


# ── Products and norms ───────────────────────────────────────────

def matmul(a: DenseMatrix, b: DenseMatrix) -> DenseMatrix:
    """Matrix product with an explicit shape check."""
    if a.ndim != 2 or b.ndim != 2:
        raise InvalidInput(f"matmul expects 2-D operands, got {a.shape} and {b.shape}")
    if a.shape[1] != b.shape[0]:
        raise InvalidInput(f"matmul dimension mismatch: {a.shape} x {b.shape}")
    return a @ b


def frobenius(m: np.ndarray) -> float:
    return float(np.linalg.norm(m))


def relative_error(approx: np.ndarray, exact: np.ndarray) -> float:
    """‖approx − exact‖_F / ‖exact‖_F (absolute when exact is zero)."""
    denom = frobenius(exact)
    diff = frobenius(approx - exact)
    return diff / denom if denom > 0.0 else diff


def stiefel_residual(x: DenseMatrix) -> float:
    """‖XᵀX − I‖_F — distance of X's columns from orthonormality."""
    r = x.shape[1]
    return frobenius(x.T @ x - np.eye(r))


def normalize_rows(m: DenseMatrix) -> DenseMatrix:
    """L2-normalize every row; zero rows are left untouched."""
    norms = np.linalg.norm(m, axis=1, keepdims=True)
    return np.divide(m, norms, out=np.zeros_like(m), where=norms > 0)


def array_digest(*arrays: np.ndarray) -> str:
    """Digest of the raw bits of *arrays* (shape-sensitive)."""
    h = hashlib.blake2b(digest_size=16)
    for arr in arrays:
        arr = np.ascontiguousarray(arr)
        h.update(str(arr.shape).encode())
        h.update(arr.tobytes())
    return h.hexdigest()
