"""
Householder thin QR with a positive-diagonal sign convention.

The sign fix makes the factorization unique (diag(R) > 0), so the map
Θ ↦ Q is a well-defined function that can be differentiated and that
returns matrices with orthonormal columns unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from orthogeo.core.exceptions import InvalidInput, RankDeficient
from orthogeo.services.linalg.kernels import DenseMatrix

# Column-rank threshold relative to the largest |R_jj|.
RANK_TOLERANCE = 1e-12


@dataclass(frozen=True)
class QrResult:
    """Thin factorization m = q · r_mat with qᵀq = I and diag(r_mat) > 0."""
    q: DenseMatrix
    r_mat: DenseMatrix


def thin_qr(m: DenseMatrix) -> QrResult:
    """
    Factor a tall matrix (rows ≥ cols) as Q R.

    Raises:
        InvalidInput:  wide input.
        RankDeficient: a column is (numerically) in the span of the previous ones.
    """
    m = np.asarray(m, dtype=np.float64)
    rows, cols = m.shape
    if rows < cols:
        raise InvalidInput(f"thin_qr needs rows >= cols, got {m.shape}")

    r_full = m.copy()
    reflectors = []

    # Reduce column by column; keep each unit reflector for Q.
    for j in range(cols):
        x = r_full[j:, j]
        norm_x = np.linalg.norm(x)
        if norm_x == 0.0:
            raise RankDeficient(column=j)
        v = x.copy()
        v[0] += norm_x if x[0] >= 0.0 else -norm_x
        v /= np.linalg.norm(v)
        r_full[j:, j:] -= 2.0 * np.outer(v, v @ r_full[j:, j:])
        reflectors.append(v)

    r_mat = np.triu(r_full[:cols, :])

    # Column-rank test on the triangular factor.
    diag = np.abs(np.diag(r_mat))
    threshold = RANK_TOLERANCE * diag.max()
    bad = np.flatnonzero(diag <= threshold)
    if bad.size:
        raise RankDeficient(column=int(bad[0]))

    # Q = H_0 H_1 … H_{n-1} applied to the first n columns of the identity.
    q = np.eye(rows, cols)
    for j in range(cols - 1, -1, -1):
        v = reflectors[j]
        q[j:, :] -= 2.0 * np.outer(v, v @ q[j:, :])

    # Sign fix: flip columns of Q / rows of R so diag(R) > 0.
    signs = np.where(np.diag(r_mat) < 0.0, -1.0, 1.0)
    q = q * signs[np.newaxis, :]
    r_mat = r_mat * signs[:, np.newaxis]

    return QrResult(q=q, r_mat=r_mat)
