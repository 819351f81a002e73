"""
AdamW over named Euclidean tensors.

Single Responsibility: one decoupled-weight-decay Adam step over a dict
of parameter arrays, plus the optimizer state that makes a run
resumable.  The step knows nothing about manifolds: OrthoGeo factors
are rebuilt from the updated Θ on the next forward.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import AbstractSet, Any, Dict, Mapping, Optional

import numpy as np

from orthogeo.core.exceptions import InvalidInput, NonFiniteGradient
from orthogeo.utils.arrays import decode_arrays, encode_arrays

logger = logging.getLogger(__name__)


@dataclass
class AdamState:
    """Moment buffers and hyperparameters; buffers are created lazily on step 1."""
    lr: float = 1e-4
    beta1: float = 0.9
    beta2: float = 0.999
    eps_adam: float = 1e-8
    weight_decay: float = 0.01
    t: int = 0
    m: Dict[str, np.ndarray] = field(default_factory=dict)
    v: Dict[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.lr < 0.0:
            raise InvalidInput(f"lr must be >= 0, got {self.lr}")
        for name in ("beta1", "beta2"):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise InvalidInput(f"{name} must be in (0, 1), got {value}")
        if not self.eps_adam > 0.0:
            raise InvalidInput(f"eps_adam must be > 0, got {self.eps_adam}")
        if self.weight_decay < 0.0:
            raise InvalidInput(f"weight_decay must be >= 0, got {self.weight_decay}")
        if self.t < 0:
            raise InvalidInput(f"step counter must be >= 0, got {self.t}")

    def hyperparameters(self) -> Dict[str, float]:
        return {
            "lr": self.lr,
            "beta1": self.beta1,
            "beta2": self.beta2,
            "eps_adam": self.eps_adam,
            "weight_decay": self.weight_decay,
        }

    def copy(self) -> "AdamState":
        return AdamState(
            **self.hyperparameters(),
            t=self.t,
            m={k: v.copy() for k, v in self.m.items()},
            v={k: v.copy() for k, v in self.v.items()},
        )

    # ── Serialization ────────────────────────────────────────

    def to_dict(self) -> Dict[str, Any]:
        return {
            **self.hyperparameters(),
            "t": self.t,
            "m": encode_arrays(self.m),
            "v": encode_arrays(self.v),
        }

    @classmethod
    def from_dict(cls, payload: Mapping[str, Any]) -> "AdamState":
        try:
            return cls(
                lr=float(payload["lr"]),
                beta1=float(payload["beta1"]),
                beta2=float(payload["beta2"]),
                eps_adam=float(payload["eps_adam"]),
                weight_decay=float(payload["weight_decay"]),
                t=int(payload["t"]),
                m=decode_arrays(payload.get("m", {})),
                v=decode_arrays(payload.get("v", {})),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInput(f"malformed optimizer state: {exc}") from exc


def adamw_step(
    params: Dict[str, np.ndarray],
    grads: Mapping[str, np.ndarray],
    state: AdamState,
    decay_exempt: AbstractSet[str] = frozenset(),
    lr_scale: Optional[Mapping[str, float]] = None,
) -> Dict[str, np.ndarray]:
    """
    One AdamW step, updating *params* in place and advancing *state*.

        m ← β₁m + (1−β₁)g          m̂ = m / (1−β₁ᵗ)
        v ← β₂v + (1−β₂)g²         v̂ = v / (1−β₂ᵗ)
        p ← p − η·(m̂/(√v̂ + ε) + λ·p)       (λ = 0 for names in decay_exempt)

    with η = lr · lr_scale[name] (names missing from lr_scale use lr).

    Every gradient is validated before any tensor is touched, so a
    rejected step leaves params and state unchanged.
    """
    if set(grads) != set(params):
        raise InvalidInput(
            f"gradient names {sorted(grads)} do not match parameters {sorted(params)}"
        )
    scales = dict(lr_scale or {})
    for name, factor in scales.items():
        if name not in params:
            raise InvalidInput(f"lr_scale names unknown tensor '{name}'")
        if not (np.isfinite(factor) and factor >= 0.0):
            raise InvalidInput(f"lr_scale['{name}'] must be finite and >= 0, got {factor}")
    for name, p in params.items():
        g = grads[name]
        if np.shape(g) != p.shape:
            raise InvalidInput(f"gradient '{name}' has shape {np.shape(g)}, expected {p.shape}")
        if not np.all(np.isfinite(g)):
            raise NonFiniteGradient(name)
        if name in state.m and state.m[name].shape != p.shape:
            raise InvalidInput(f"optimizer buffer '{name}' has shape {state.m[name].shape}, expected {p.shape}")

    state.t += 1
    bias1 = 1.0 - state.beta1 ** state.t
    bias2 = 1.0 - state.beta2 ** state.t

    for name in sorted(params):
        p = params[name]
        g = np.asarray(grads[name], dtype=np.float64)
        m = state.m.setdefault(name, np.zeros_like(p))
        v = state.v.setdefault(name, np.zeros_like(p))

        m *= state.beta1
        m += (1.0 - state.beta1) * g
        v *= state.beta2
        v += (1.0 - state.beta2) * (g * g)

        update = (m / bias1) / (np.sqrt(v / bias2) + state.eps_adam)
        if name not in decay_exempt and state.weight_decay:
            update = update + state.weight_decay * p
        p -= state.lr * scales.get(name, 1.0) * update

    return params
