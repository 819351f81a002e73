"""Linear algebra kernels — products, thin QR, Jacobi SVD, Cayley transform."""

from orthogeo.services.linalg.cayley import cayley, cayley_stiefel, cayley_stiefel_vjp
from orthogeo.services.linalg.kernels import (
    DenseMatrix,
    DenseVector,
    array_digest,
    as_matrix,
    as_vector,
    frobenius,
    matmul,
    normalize_rows,
    relative_error,
    stiefel_residual,
)
from orthogeo.services.linalg.qr import QrResult, thin_qr
from orthogeo.services.linalg.svd import SvdResult, svd_jacobi

__all__ = [
    "DenseMatrix",
    "DenseVector",
    "QrResult",
    "SvdResult",
    "array_digest",
    "as_matrix",
    "as_vector",
    "cayley",
    "cayley_stiefel",
    "cayley_stiefel_vjp",
    "frobenius",
    "matmul",
    "normalize_rows",
    "relative_error",
    "stiefel_residual",
    "svd_jacobi",
    "thin_qr",
]
