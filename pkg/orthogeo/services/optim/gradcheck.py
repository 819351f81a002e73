"""
Finite-difference gradient checker.

Central differences along seeded coordinate directions, compared with
the analytic gradient the loss function reports for the same point.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Mapping, Optional, Tuple

import numpy as np

from orthogeo.core.exceptions import InvalidInput

logger = logging.getLogger(__name__)

# loss_fn(params) -> (loss, analytic grads keyed like params)
LossFn = Callable[[Dict[str, np.ndarray]], Tuple[float, Mapping[str, np.ndarray]]]

# Disagreement below this many ulps of the loss, divided by 2h, is what
# central differences cannot resolve; it is subtracted before dividing.
_ROUNDOFF_ULPS = 1e3
# Denominator floor as a fraction of the largest analytic entry.
_RELATIVE_FLOOR = 1e-8
_EPS = float(np.finfo(np.float64).eps)


@dataclass(frozen=True)
class GradCheckResult:
    max_error: float
    worst_tensor: str
    worst_index: int
    n_probes: int

    def __float__(self) -> float:
        return self.max_error


def grad_check(
    loss_fn: LossFn,
    params: Dict[str, np.ndarray],
    probes: Optional[int] = 20,
    h: float = 1e-6,
    seed: int = 0,
    analytic: Optional[Mapping[str, np.ndarray]] = None,
) -> GradCheckResult:
    """
    Max relative error between analytic and central-difference gradients.

    ``params`` is perturbed in place one coordinate at a time and restored
    bit-exactly after each probe.  ``probes=None`` (or more probes than
    coordinates) checks every coordinate.  ``analytic`` overrides the
    gradient reported by ``loss_fn``.
    """
    if not h > 0.0:
        raise InvalidInput(f"step h must be > 0, got {h}")
    names = sorted(params)
    sizes = [params[n].size for n in names]
    total = int(sum(sizes))
    if total == 0:
        raise InvalidInput("no parameters to check")

    _, reported = loss_fn(params)
    grads = {n: np.asarray((analytic or reported)[n], dtype=np.float64) for n in names}
    scale = max(float(np.max(np.abs(g))) if g.size else 0.0 for g in grads.values())
    floor = max(_RELATIVE_FLOOR * scale, 1e-12)

    coords = _probe_coordinates(names, sizes, total, probes, seed)
    worst = (0.0, names[0], 0)
    for name, idx in coords:
        p = params[name]
        original = p.flat[idx]
        p.flat[idx] = original + h
        f_plus, _ = loss_fn(params)
        p.flat[idx] = original - h
        f_minus, _ = loss_fn(params)
        p.flat[idx] = original

        numeric = (float(f_plus) - float(f_minus)) / (2.0 * h)
        exact = float(grads[name].flat[idx])
        resolution = _ROUNDOFF_ULPS * _EPS * max(abs(float(f_plus)), abs(float(f_minus)), 1.0) / h
        gap = max(abs(exact - numeric) - resolution, 0.0)
        err = gap / max(abs(exact), abs(numeric), floor)
        if err > worst[0]:
            worst = (err, name, idx)

    logger.debug(
        "[GradCheck] %d probes, max relative error %.3e at %s[%d]",
        len(coords), worst[0], worst[1], worst[2],
    )
    return GradCheckResult(
        max_error=worst[0], worst_tensor=worst[1], worst_index=worst[2], n_probes=len(coords)
    )


def _probe_coordinates(
    names: List[str], sizes: List[int], total: int, probes: Optional[int], seed: int
) -> List[Tuple[str, int]]:
    if probes is None or probes >= total:
        flat = np.arange(total)
    else:
        if probes < 1:
            raise InvalidInput(f"probes must be >= 1, got {probes}")
        flat = np.sort(np.random.default_rng(seed).choice(total, size=probes, replace=False))
    offsets = np.cumsum([0] + sizes)
    coords = []
    for k in flat:
        t = int(np.searchsorted(offsets, k, side="right") - 1)
        coords.append((names[t], int(k - offsets[t])))
    return coords
