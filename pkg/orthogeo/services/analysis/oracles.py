"""
Gradient oracle suite — finite-difference checks of every analytic backward.

Each check builds a small seeded problem (d ≤ 12, r ≤ 4), wraps it as a
pure loss over named arrays and hands it to ``grad_check``.  The suite
returns one row per check: check, max_error, worst, passed.
"""

from __future__ import annotations

import logging
from typing import Callable, Dict, List, Tuple

import numpy as np
import pandas as pd

from orthogeo.core.config import settings
from orthogeo.services.adapters.engine import adapter_engine
from orthogeo.services.bench.encoder import BiEncoder
from orthogeo.services.bench.loss import infonce_loss
from orthogeo.services.optim import GradCheckResult, grad_check
from orthogeo.services.reparam import (
    OrthMethod,
    SigmaMode,
    orth_map,
    orth_map_vjp,
    sigma_map,
    sigma_map_vjp,
)

logger = logging.getLogger(__name__)

ORACLE_COLUMNS = ["check", "max_error", "worst", "passed"]

Problem = Tuple[Callable, Dict[str, np.ndarray]]


# ── Problems ─────────────────────────────────────────────────────

def _orth_problem(method: OrthMethod, d: int, r: int, rng: np.random.Generator) -> Problem:
    params = {"theta": rng.standard_normal((d, r))}
    weights = rng.standard_normal((d, r))

    def loss_fn(p):
        a = orth_map(p["theta"], method)
        return float(np.sum(weights * a)), {"theta": orth_map_vjp(p["theta"], weights, method)}

    return loss_fn, params


def _sigma_problem(mode: SigmaMode, r: int, rng: np.random.Generator) -> Problem:
    params = {"s": rng.standard_normal(r)}
    weights = rng.standard_normal(r)
    eps = 1e-6

    def loss_fn(p):
        sigma = sigma_map(p["s"], mode, eps)
        return float(weights @ sigma), {"s": sigma_map_vjp(p["s"], mode, eps, weights)}

    return loss_fn, params


def _randomize(adapter, rng: np.random.Generator) -> None:
    """Move off the init point so every factor carries gradient."""
    for t in adapter.tensors().values():
        t[...] = rng.standard_normal(t.shape)


def _adapter_problem(method: str, d: int, r: int, rng: np.random.Generator, **options) -> Problem:
    w0 = rng.standard_normal((d + 1, d)) / np.sqrt(d)
    adapter = adapter_engine.create(method, w0, r, 2.0 * r, rng, **options)
    _randomize(adapter, rng)
    x = rng.standard_normal((d, 5))
    weights = rng.standard_normal((d + 1, 5))

    def loss_fn(p):
        y, cache = adapter.forward(x)
        return float(np.sum(weights * y)), adapter.backward(cache, weights)

    return loss_fn, adapter.tensors()


def _infonce_problem(d: int, rng: np.random.Generator) -> Problem:
    q = rng.standard_normal((6, d))
    c = rng.standard_normal((4, d))
    params = {
        "q": q / np.linalg.norm(q, axis=1, keepdims=True),
        "c": c / np.linalg.norm(c, axis=1, keepdims=True),
    }
    gold = rng.integers(0, 4, size=6)

    def loss_fn(p):
        loss, g_q, g_c = infonce_loss(p["q"], p["c"], gold, 0.5)
        return loss, {"q": g_q, "c": g_c}

    return loss_fn, params


def _encoder_problem(method: str, d: int, r: int, rng: np.random.Generator) -> Problem:
    """InfoNCE on normalized encoder outputs, differentiated down to the adapter tensors."""
    w0 = rng.standard_normal((d, d)) / np.sqrt(d)
    adapter = adapter_engine.create(method, w0, r, 2.0 * r, rng)
    _randomize(adapter, rng)
    enc = BiEncoder(w0, adapter, temperature=0.5)
    rows = rng.standard_normal((8, d))          # 5 queries, 3 candidates
    gold = np.array([0, 1, 2, 0, 1])

    def loss_fn(p):
        emb, cache = enc.forward(rows)
        loss, g_q, g_c = infonce_loss(emb[:5], emb[5:], gold, enc.temperature)
        return loss, enc.backward(cache, np.vstack([g_q, g_c]))

    return loss_fn, adapter.tensors()


# ── Suite ────────────────────────────────────────────────────────

def gradient_oracles(
    seed: int = 0,
    d: int = 10,
    r: int = 3,
    probes: int = 20,
    h: float = 1e-6,
    tolerance: float | None = None,
) -> pd.DataFrame:
    """Run every finite-difference check; one row per check."""
    tolerance = settings.GRADCHECK_TOLERANCE if tolerance is None else tolerance
    rng = np.random.default_rng(seed)
    problems: List[Tuple[str, Problem]] = [
        ("orth_map[householder]", _orth_problem(OrthMethod.HOUSEHOLDER, d, r, rng)),
        ("orth_map[cayley]", _orth_problem(OrthMethod.CAYLEY, d, r, rng)),
        ("sigma_map[softplus]", _sigma_problem(SigmaMode.SOFTPLUS, r, rng)),
        ("sigma_map[direct]", _sigma_problem(SigmaMode.DIRECT, r, rng)),
        ("adapter[orthogeo]", _adapter_problem("orthogeo", d, r, rng)),
        ("adapter[orthogeo,cayley]", _adapter_problem("orthogeo", d, r, rng, orth_method=OrthMethod.CAYLEY)),
        ("adapter[lora]", _adapter_problem("lora", d, r, rng)),
        ("infonce", _infonce_problem(d, rng)),
        ("encoder+infonce[orthogeo]", _encoder_problem("orthogeo", d, r, rng)),
        ("encoder+infonce[lora]", _encoder_problem("lora", d, r, rng)),
    ]

    rows = []
    for i, (name, (loss_fn, params)) in enumerate(problems):
        res: GradCheckResult = grad_check(loss_fn, params, probes=probes, h=h, seed=seed + i)
        rows.append(
            {
                "check": name,
                "max_error": res.max_error,
                "worst": f"{res.worst_tensor}[{res.worst_index}]",
                "passed": res.max_error <= tolerance,
            }
        )
        logger.info("[Oracles] %-28s max relative error %.3e", name, res.max_error)
    return pd.DataFrame(rows, columns=ORACLE_COLUMNS)
