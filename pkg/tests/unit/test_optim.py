"""
Unit tests for AdamW and the finite-difference checker (services/optim).

Coverage:
  - adamw_step: zero gradients, one hand-computed step, scalar oracle,
    decoupled decay and its exemptions, per-tensor lr multipliers,
    non-finite gradients, state round trip
  - Stiefel membership after many optimizer steps (constraint transparency)
  - grad_check: quadratic exactness, OrthoGeo layer oracle, fault injection
    on large and small entries, zero-gradient coordinates,
    parameter restoration
"""

from __future__ import annotations

import json
import math

import numpy as np
import pytest

from orthogeo.core.exceptions import InvalidInput, NonFiniteGradient
from orthogeo.services.adapters import adapter_engine
from orthogeo.services.linalg import stiefel_residual
from orthogeo.services.optim import AdamState, adamw_step, grad_check


def _scalar_adamw(p, g, m, v, t, lr=1e-4, b1=0.9, b2=0.999, eps=1e-8, wd=0.0):
    """Independent scalar reference for one AdamW step."""
    t += 1
    m = m * b1
    m = m + (1.0 - b1) * g
    v = v * b2
    v = v + (1.0 - b2) * (g * g)
    update = (m / (1.0 - b1 ** t)) / (math.sqrt(v / (1.0 - b2 ** t)) + eps) + wd * p
    return p - lr * update, m, v, t


def _quadratic(params):
    p = params["p"]
    return 0.5 * float(p @ p), {"p": p.copy()}


# ── adamw_step ───────────────────────────────────────────────────

def test_zero_grads_leave_params_unchanged(rng):
    params = {"w": rng.standard_normal((3, 2))}
    before = params["w"].copy()
    state = AdamState(weight_decay=0.0)
    adamw_step(params, {"w": np.zeros((3, 2))}, state)
    assert np.array_equal(params["w"], before)
    assert state.t == 1


def test_single_step_hand_example():
    params = {"p": np.array([1.0])}
    adamw_step(params, {"p": np.array([1.0])}, AdamState(weight_decay=0.0))
    assert params["p"][0] == pytest.approx(1.0 - 1e-4 / (1.0 + 1e-8), abs=1e-15)


def test_matches_scalar_reference():
    params = {"p": np.array([0.3])}
    state = AdamState(weight_decay=0.01)
    p, m, v, t = 0.3, 0.0, 0.0, 0
    for g in (1.0, 1.0, -0.4, 2.5):
        adamw_step(params, {"p": np.array([g])}, state)
        p, m, v, t = _scalar_adamw(p, g, m, v, t, wd=0.01)
        assert abs(params["p"][0] - p) <= 1e-15
    assert state.t == t == 4


def test_decay_exempt_tensors_are_not_decayed():
    params = {"theta": np.array([2.0]), "s": np.array([2.0])}
    grads = {"theta": np.zeros(1), "s": np.zeros(1)}
    adamw_step(params, grads, AdamState(lr=0.1, weight_decay=0.5), decay_exempt={"s"})
    assert params["theta"][0] == pytest.approx(2.0 - 0.1 * 0.5 * 2.0)
    assert params["s"][0] == 2.0


def test_lr_scale_multiplies_the_step():
    params = {"a": np.array([1.0]), "b": np.array([1.0])}
    grads = {"a": np.array([2.0]), "b": np.array([2.0])}
    adamw_step(params, grads, AdamState(lr=0.1, weight_decay=0.0), lr_scale={"a": 3.0})
    step = 0.1 * 2.0 / (2.0 + 1e-8)
    assert params["a"][0] == pytest.approx(1.0 - 3.0 * step, abs=1e-15)
    assert params["b"][0] == pytest.approx(1.0 - step, abs=1e-15)


def test_lr_scale_also_scales_decay():
    params = {"w": np.array([2.0])}
    adamw_step(params, {"w": np.zeros(1)}, AdamState(lr=0.1, weight_decay=0.5), lr_scale={"w": 2.0})
    assert params["w"][0] == pytest.approx(2.0 - 2.0 * 0.1 * 0.5 * 2.0)


@pytest.mark.parametrize("lr_scale", [{"c": 1.0}, {"a": -1.0}, {"a": float("inf")}])
def test_bad_lr_scale_rejected(lr_scale):
    params = {"a": np.ones(2)}
    state = AdamState()
    with pytest.raises(InvalidInput):
        adamw_step(params, {"a": np.ones(2)}, state, lr_scale=lr_scale)
    assert state.t == 0 and np.array_equal(params["a"], np.ones(2))


def test_zero_learning_rate_is_a_no_op(rng):

    params = {"w": rng.standard_normal(4)}
    before = params["w"].copy()
    adamw_step(params, {"w": rng.standard_normal(4)}, AdamState(lr=0.0))
    assert np.array_equal(params["w"], before)


def test_non_finite_gradient_names_tensor_and_keeps_state(rng):
    params = {"a": rng.standard_normal(3), "b": rng.standard_normal(2)}
    before = {k: v.copy() for k, v in params.items()}
    state = AdamState()
    with pytest.raises(NonFiniteGradient) as info:
        adamw_step(params, {"a": np.zeros(3), "b": np.array([1.0, np.nan])}, state)
    assert info.value.tensor == "b"
    assert state.t == 0
    assert all(np.array_equal(params[k], before[k]) for k in params)


def test_mismatched_gradient_names_rejected():
    with pytest.raises(InvalidInput):
        adamw_step({"a": np.zeros(2)}, {"b": np.zeros(2)}, AdamState())


def test_invalid_hyperparameters_rejected():
    with pytest.raises(InvalidInput):
        AdamState(beta1=1.0)
    with pytest.raises(InvalidInput):
        AdamState(lr=-1e-3)


def test_state_roundtrip_continues_bit_identically(rng):
    grads = [{"w": rng.standard_normal((4, 3))} for _ in range(6)]
    start = rng.standard_normal((4, 3))

    straight = {"w": start.copy()}
    state = AdamState()
    for g in grads:
        adamw_step(straight, g, state)

    resumed = {"w": start.copy()}
    state = AdamState()
    for g in grads[:3]:
        adamw_step(resumed, g, state)
    state = AdamState.from_dict(json.loads(json.dumps(state.to_dict())))
    for g in grads[3:]:
        adamw_step(resumed, g, state)

    assert np.array_equal(resumed["w"], straight["w"])


def test_malformed_state_rejected():
    with pytest.raises(InvalidInput):
        AdamState.from_dict({"lr": 1e-4})


def test_stiefel_membership_survives_training_steps(rng):
    adapter = adapter_engine.create("orthogeo", rng.standard_normal((12, 16)), 4, 16.0, rng)
    state = AdamState(lr=5e-2)
    for _ in range(200):
        x = rng.standard_normal((16, 8))
        y, cache = adapter.forward(x)
        adamw_step(adapter.tensors(), adapter.backward(cache, y), state, adapter.decay_exempt)
        f = adapter.factors()
        assert stiefel_residual(f.a) <= 1e-10
        assert stiefel_residual(f.b) <= 1e-10


# ── grad_check ───────────────────────────────────────────────────

def test_grad_check_quadratic_is_exact():
    params = {"p": np.array([1.0, -2.0, 0.5, 3.0])}
    assert grad_check(_quadratic, params, probes=None, h=1e-3).max_error <= 1e-9


def test_grad_check_restores_parameters(rng):
    params = {"p": rng.standard_normal(7)}
    before = params["p"].copy()
    grad_check(_quadratic, params, probes=5)
    assert np.array_equal(params["p"], before)


def test_grad_check_orthogeo_layer(rng):
    adapter = adapter_engine.create("orthogeo", rng.standard_normal((10, 10)), 3, 16.0, rng)
    adapter.params.s[:] = rng.standard_normal(3)
    x, weights = rng.standard_normal((10, 4)), rng.standard_normal((10, 4))

    def loss_fn(_params):
        y, cache = adapter.forward(x)
        return float(np.sum(weights * y)), adapter.backward(cache, weights)

    result = grad_check(loss_fn, adapter.tensors(), probes=20)
    assert result.n_probes == 20
    assert float(result) <= 1e-5


def test_grad_check_detects_corrupted_entry(rng):
    params = {"p": rng.standard_normal(6)}
    corrupted = params["p"].copy()
    worst = int(np.argmax(np.abs(corrupted)))
    corrupted[worst] *= 1.1
    result = grad_check(_quadratic, params, probes=None, analytic={"p": corrupted})
    assert result.max_error >= 0.05
    assert result.worst_index == worst


def test_grad_check_detects_corrupted_small_entry():
    # A 10% error on an entry far below the largest one still counts.
    params = {"p": np.array([100.0, 1.0, 0.3, -2.0])}
    corrupted = params["p"].copy()
    corrupted[2] *= 1.1
    result = grad_check(_quadratic, params, probes=None, analytic={"p": corrupted})
    assert result.max_error >= 0.05
    assert result.worst_index == 2


def test_grad_check_tolerates_zero_gradient_coordinates():
    params = {"p": np.array([3.0, 0.0, -1.5])}
    assert grad_check(_quadratic, params, probes=None).max_error <= 1e-9


def test_grad_check_rejects_bad_step():
    with pytest.raises(InvalidInput):
        grad_check(_quadratic, {"p": np.ones(2)}, h=0.0)
