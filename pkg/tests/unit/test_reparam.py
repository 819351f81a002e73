"""
Unit tests for the geometric reparameterization (services/reparam).

Coverage:
  - orth_map: fixed point, hand example, large Stiefel residual, Cayley branch
  - orth_map_vjp: zero cotangent, single-column hand gradient, FD oracle
  - sigma_map / sigma_map_vjp: softplus values, underflow limit, Direct passthrough
  - build_factors: hand example, zero update in Direct mode, error attribution
  - EuclideanParams: validation, initialization schemes
"""

from __future__ import annotations

import numpy as np
import pytest

from orthogeo.core.exceptions import InvalidInput, RankDeficient
from orthogeo.services.linalg import stiefel_residual, thin_qr
from orthogeo.services.optim import grad_check
from orthogeo.services.reparam import (
    EuclideanParams,
    InitScheme,
    OrthMethod,
    SigmaMode,
    build_factors,
    orth_map,
    orth_map_vjp,
    sigma_map,
    sigma_map_vjp,
)

EPS = 1e-6


def _probe_loss(weights: np.ndarray, method: OrthMethod):
    """L(Θ) = ⟨weights, orth_map(Θ)⟩ with its VJP gradient."""

    def loss_fn(params):
        theta = params["theta"]
        value = float(np.sum(weights * orth_map(theta, method)))
        return value, {"theta": orth_map_vjp(theta, weights, method)}

    return loss_fn


# ── orth_map ─────────────────────────────────────────────────────

def test_orth_map_fixed_point(rng):
    q = thin_qr(rng.standard_normal((8, 3))).q
    assert np.allclose(orth_map(q), q, atol=1e-12)


def test_orth_map_hand_example():
    assert np.allclose(orth_map(np.array([[3.0], [4.0]])), [[0.6], [0.8]], atol=1e-15)


def test_orth_map_large_factor_on_stiefel():
    theta = np.random.default_rng(0).standard_normal((384, 8))
    assert stiefel_residual(orth_map(theta)) <= 1e-10


def test_orth_map_cayley_branch_on_stiefel(rng):
    a = orth_map(rng.standard_normal((12, 4)), OrthMethod.CAYLEY)
    assert stiefel_residual(a) <= 1e-10


# ── orth_map_vjp ─────────────────────────────────────────────────

def test_orth_vjp_zero_cotangent(rng):
    theta = rng.standard_normal((6, 2))
    assert np.array_equal(orth_map_vjp(theta, np.zeros((6, 2))), np.zeros((6, 2)))


def test_orth_vjp_single_column_hand_gradient():
    theta = np.array([[3.0], [4.0], [0.0], [0.0]])
    grad_a = np.array([[1.0], [0.0], [0.0], [0.0]])
    # (I − qqᵀ) e₁ / ‖θ‖ with q = (0.6, 0.8, 0, 0)
    expected = np.array([[0.128], [-0.096], [0.0], [0.0]])
    assert np.allclose(orth_map_vjp(theta, grad_a), expected, atol=1e-14)


@pytest.mark.parametrize("d,r", [(6, 2), (10, 3), (12, 4)])
@pytest.mark.parametrize("method", [OrthMethod.HOUSEHOLDER, OrthMethod.CAYLEY])
def test_orth_vjp_matches_finite_differences(d, r, method):
    rng = np.random.default_rng(100 * d + r)
    params = {"theta": rng.standard_normal((d, r))}
    weights = rng.standard_normal((d, r))
    result = grad_check(_probe_loss(weights, method), params, probes=20, seed=d)
    assert result.max_error <= 1e-5


# ── sigma_map ────────────────────────────────────────────────────

def test_sigma_softplus_at_zero():
    sigma = sigma_map(np.array([0.0]), SigmaMode.SOFTPLUS, EPS)
    assert sigma[0] == pytest.approx(np.log(2.0) + EPS, abs=1e-15)


def test_sigma_direct_is_identity():
    s = np.array([0.5, -0.2])
    assert np.array_equal(sigma_map(s, SigmaMode.DIRECT), s)


def test_sigma_softplus_underflow_limit():
    sigma = sigma_map(np.array([-40.0]), SigmaMode.SOFTPLUS, EPS)
    assert abs(sigma[0] - EPS) <= 1e-17


def test_sigma_softplus_large_argument_is_finite():
    sigma = sigma_map(np.array([800.0]), SigmaMode.SOFTPLUS, EPS)
    assert sigma[0] == pytest.approx(800.0)


def test_sigma_softplus_positive(rng):
    s = rng.normal(0.0, 20.0, size=50)
    assert np.all(sigma_map(s, SigmaMode.SOFTPLUS, EPS) >= EPS)


def test_sigma_vjp_sigmoid_at_zero():
    g = sigma_map_vjp(np.array([0.0]), SigmaMode.SOFTPLUS, EPS, np.array([1.0]))
    assert g[0] == pytest.approx(0.5, abs=1e-16)


def test_sigma_vjp_direct_passthrough():
    grad = np.array([1.5, -2.0])
    assert np.array_equal(sigma_map_vjp(np.array([3.0, 4.0]), SigmaMode.DIRECT, EPS, grad), grad)


def test_sigma_vjp_matches_finite_differences(rng):
    s0 = rng.uniform(-1.0, 1.0, size=6)
    weights = np.ones(6)

    def loss_fn(params):
        s = params["s"]
        value = float(weights @ sigma_map(s, SigmaMode.SOFTPLUS, EPS))
        return value, {"s": sigma_map_vjp(s, SigmaMode.SOFTPLUS, EPS, weights)}

    assert grad_check(loss_fn, {"s": s0}, probes=None, h=1e-5).max_error <= 1e-8


# ── build_factors ────────────────────────────────────────────────

def test_build_factors_hand_example():
    p = EuclideanParams(
        theta_a=np.array([[5.0], [0.0], [0.0]]),
        theta_b=np.array([[0.0], [7.0], [0.0]]),
        s=np.array([0.0]),
    )
    f = build_factors(p)
    assert np.allclose(f.a, [[1.0], [0.0], [0.0]], atol=1e-15)
    assert np.allclose(f.b, [[0.0], [1.0], [0.0]], atol=1e-15)
    assert f.sigma[0] == pytest.approx(np.log(2.0) + EPS, abs=1e-15)


def test_build_factors_direct_zero_update(rng):
    p = EuclideanParams.initialize(7, 5, 3, rng, sigma_mode=SigmaMode.DIRECT)
    f = build_factors(p)
    assert np.array_equal(f.sigma, np.zeros(3))
    assert not np.any(f.delta())


def test_build_factors_square_stiefel():
    p = EuclideanParams.initialize(384, 384, 8, np.random.default_rng(3))
    f = build_factors(p)
    assert stiefel_residual(f.a) <= 1e-10
    assert stiefel_residual(f.b) <= 1e-10


def test_build_factors_is_deterministic(rng):
    p = EuclideanParams.initialize(9, 6, 3, rng)
    first, second = build_factors(p), build_factors(p.copy())
    assert np.array_equal(first.a, second.a)
    assert np.array_equal(first.b, second.b)
    assert np.array_equal(first.sigma, second.sigma)


def test_build_factors_names_failing_factor(rng):
    p = EuclideanParams.initialize(6, 5, 2, rng)
    p.theta_b[:, 1] = 0.0
    with pytest.raises(RankDeficient) as info:
        build_factors(p)
    assert info.value.factor == "theta_b"
    assert info.value.column == 1


def test_full_composition_matches_finite_differences(rng):
    """Loss on (A, B, σ) pulled back through every map at once."""
    p = EuclideanParams.initialize(10, 8, 3, rng)
    p.s[:] = rng.standard_normal(3)
    w_a, w_b, w_s = rng.standard_normal((10, 3)), rng.standard_normal((8, 3)), rng.standard_normal(3)

    def loss_fn(params):
        q = EuclideanParams(params["theta_a"], params["theta_b"], params["s"])
        f = build_factors(q)
        value = float(np.sum(w_a * f.a) + np.sum(w_b * f.b) + w_s @ f.sigma)
        return value, {
            "theta_a": orth_map_vjp(q.theta_a, w_a),
            "theta_b": orth_map_vjp(q.theta_b, w_b),
            "s": sigma_map_vjp(q.s, q.sigma_mode, q.epsilon, w_s),
        }

    assert grad_check(loss_fn, p.tensors(), probes=20).max_error <= 1e-5


# ── EuclideanParams ──────────────────────────────────────────────

def test_params_reject_rank_above_dims():
    with pytest.raises(InvalidInput):
        EuclideanParams(np.ones((2, 3)), np.ones((5, 3)), np.zeros(3))


def test_params_reject_zero_epsilon_in_softplus():
    with pytest.raises(InvalidInput):
        EuclideanParams(np.eye(3, 2), np.eye(3, 2), np.zeros(2), epsilon=0.0)


def test_params_softplus_init_is_near_zero(rng):
    p = EuclideanParams.initialize(6, 6, 2, rng)
    sigma = build_factors(p).sigma
    assert np.all(sigma < 3e-3)
    assert np.all(sigma > EPS)


def test_kaiming_uniform_bound(rng):
    p = EuclideanParams.initialize(24, 6, 4, rng, init_scheme=InitScheme.KAIMING_UNIFORM)
    assert np.max(np.abs(p.theta_a)) <= np.sqrt(6.0 / 24)
    assert np.max(np.abs(p.theta_b)) <= np.sqrt(6.0 / 6)
