"""
Unit tests for the dense kernels (services/linalg).

Coverage:
  - matmul: identity, hand product, annihilator, shape mismatch, associativity
  - thin_qr: single-column normalization, orthonormal fixed point, sign
    convention, reconstruction, rank deficiency, determinism
  - svd_jacobi: diagonal and rank-one spectra, reconstruction, size guard
  - cayley: zero and 2×2 closed form, orthogonality, inverse pairing, input checks
"""

from __future__ import annotations

import numpy as np
import pytest

from orthogeo.core.exceptions import InvalidInput, InvalidSkew, RankDeficient, SingularCayley, SizeLimitExceeded
from orthogeo.services.linalg import (
    as_matrix,
    cayley,
    cayley_stiefel,
    matmul,
    normalize_rows,
    relative_error,
    stiefel_residual,
    svd_jacobi,
    thin_qr,
)
from orthogeo.services.linalg import svd as svd_module


def _skew(rng, d: int) -> np.ndarray:
    g = rng.standard_normal((d, d))
    return g - g.T


# ── matmul ───────────────────────────────────────────────────────

def test_matmul_identity_returns_operand(rng):
    m = rng.standard_normal((2, 3))
    assert np.array_equal(matmul(np.eye(2), m), m)


def test_matmul_hand_example():
    out = matmul(np.array([[1.0, 2.0], [3.0, 4.0]]), np.array([[0.0], [1.0]]))
    assert np.array_equal(out, np.array([[2.0], [4.0]]))


def test_matmul_zero_annihilates(rng):
    assert np.array_equal(matmul(np.zeros((3, 3)), rng.standard_normal((3, 3))), np.zeros((3, 3)))


def test_matmul_dimension_mismatch_raises():
    with pytest.raises(InvalidInput):
        matmul(np.ones((2, 3)), np.ones((2, 3)))


def test_matmul_repeated_calls_are_bit_identical(rng):
    a, b = rng.standard_normal((7, 5)), rng.standard_normal((5, 4))
    assert np.array_equal(matmul(a, b), matmul(a, b))


def test_matmul_associativity(rng):
    for _ in range(10):
        a, b, c = (rng.standard_normal((4, 4)) for _ in range(3))
        left = matmul(matmul(a, b), c)
        right = matmul(a, matmul(b, c))
        assert relative_error(left, right) <= 1e-12


def test_as_matrix_rejects_nan():
    with pytest.raises(InvalidInput):
        as_matrix([[1.0, np.nan]])


def test_normalize_rows_leaves_zero_rows():
    out = normalize_rows(np.array([[3.0, 4.0], [0.0, 0.0]]))
    assert np.allclose(out, [[0.6, 0.8], [0.0, 0.0]])


# ── thin_qr ──────────────────────────────────────────────────────

def test_qr_single_column_hand_example():
    res = thin_qr(np.array([[3.0], [4.0]]))
    assert np.allclose(res.q, [[0.6], [0.8]], atol=1e-15)
    assert np.allclose(res.r_mat, [[5.0]], atol=1e-14)


def test_qr_orthonormal_input_is_fixed_point(rng):
    m = thin_qr(rng.standard_normal((9, 4))).q
    res = thin_qr(m)
    assert np.allclose(res.q, m, atol=1e-12)
    assert np.allclose(res.r_mat, np.eye(4), atol=1e-12)


def test_qr_properties_over_seeded_samples():
    for seed in range(100):
        m = np.random.default_rng(seed).standard_normal((10, 3))
        res = thin_qr(m)
        assert stiefel_residual(res.q) <= 1e-12
        assert np.all(np.diag(res.r_mat) > 0.0)
        assert np.array_equal(res.r_mat, np.triu(res.r_mat))
        assert relative_error(res.q @ res.r_mat, m) <= 1e-10


def test_qr_is_deterministic(rng):
    m = rng.standard_normal((12, 5))
    first, second = thin_qr(m), thin_qr(m.copy())
    assert np.array_equal(first.q, second.q)
    assert np.array_equal(first.r_mat, second.r_mat)


def test_qr_rank_deficient_names_column(rng):
    m = rng.standard_normal((6, 3))
    m[:, 2] = 2.0 * m[:, 0] - m[:, 1]
    with pytest.raises(RankDeficient) as info:
        thin_qr(m)
    assert info.value.column == 2


def test_qr_zero_column_is_rank_deficient():
    with pytest.raises(RankDeficient) as info:
        thin_qr(np.array([[1.0, 0.0], [0.0, 0.0], [0.0, 0.0]]))
    assert info.value.column == 1


def test_qr_rejects_wide_input():
    with pytest.raises(InvalidInput):
        thin_qr(np.ones((2, 3)))


# ── svd_jacobi ───────────────────────────────────────────────────

def test_svd_diagonal_sorted():
    res = svd_jacobi(np.diag([3.0, 1.0, 2.0]))
    assert np.allclose(res.s, [3.0, 2.0, 1.0], atol=1e-14)


def test_svd_rank_one_outer_product():
    u = np.array([2.0, 0.0, 0.0, 0.0])
    v = np.array([0.0, 3.0, 0.0])
    res = svd_jacobi(np.outer(u, v))
    assert res.s[0] == pytest.approx(6.0, rel=1e-14)
    assert np.all(np.abs(res.s[1:]) <= 1e-14)


def test_svd_reconstruction_and_order(rng):
    for shape in [(20, 8), (8, 20), (5, 5)]:
        m = rng.standard_normal(shape)
        res = svd_jacobi(m)
        assert np.all(np.diff(res.s) <= 0.0)
        assert np.all(res.s >= 0.0)
        assert relative_error(res.u @ np.diag(res.s) @ res.v.T, m) <= 1e-8
        assert stiefel_residual(res.u) <= 1e-10
        assert stiefel_residual(res.v) <= 1e-10


def test_svd_matches_eigenvalues_of_gram(rng):
    m = rng.standard_normal((9, 6))
    expected = np.sqrt(np.sort(np.linalg.eigvalsh(m.T @ m))[::-1])
    assert np.allclose(svd_jacobi(m).s, expected, rtol=1e-8)


def test_svd_zero_matrix_keeps_orthonormal_basis():
    res = svd_jacobi(np.zeros((4, 3)))
    assert np.array_equal(res.s, np.zeros(3))
    assert stiefel_residual(res.u) <= 1e-12


def test_svd_size_guard(monkeypatch):
    monkeypatch.setattr(svd_module, "MAX_DIM", 4)
    with pytest.raises(SizeLimitExceeded):
        svd_jacobi(np.ones((5, 2)))


# ── cayley ───────────────────────────────────────────────────────

def test_cayley_zero_is_identity():
    assert np.array_equal(cayley(np.zeros((3, 3))), np.eye(3))


def test_cayley_two_by_two_closed_form():
    q = cayley(np.array([[0.0, 1.0], [-1.0, 0.0]]))
    assert np.allclose(q, [[0.0, -1.0], [1.0, 0.0]], atol=1e-15)


def test_cayley_orthogonal_and_inverse_pairing(rng):
    x = _skew(rng, 6)
    q = cayley(x)
    assert stiefel_residual(q) <= 1e-10
    assert np.allclose(cayley(-x), q.T, atol=1e-10)


def test_cayley_rejects_non_skew():
    with pytest.raises(InvalidSkew):
        cayley(np.array([[0.0, 1.0], [1.0, 0.0]]))


def test_cayley_rejects_non_square():
    with pytest.raises(InvalidInput):
        cayley(np.zeros((2, 3)))


def test_cayley_singular_is_reported(monkeypatch):
    def _raise(*_args, **_kwargs):
        raise np.linalg.LinAlgError("Singular matrix")

    monkeypatch.setattr(np.linalg, "solve", _raise)
    with pytest.raises(SingularCayley):
        cayley(np.zeros((2, 2)))


def test_cayley_stiefel_columns(rng):
    a = cayley_stiefel(rng.standard_normal((10, 3)))
    assert a.shape == (10, 3)
    assert stiefel_residual(a) <= 1e-10
    assert np.array_equal(cayley_stiefel(np.zeros((5, 2))), np.eye(5, 2))
