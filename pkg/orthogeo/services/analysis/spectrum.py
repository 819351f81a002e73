"""
Spectrum analysis — singular values of learned updates.

Single Responsibility: turn adapters into spectrum records and the
long-format spectrum table (method, r, idx, sigma).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, List, Tuple

import numpy as np
import pandas as pd

from orthogeo.core.exceptions import InvalidInput
from orthogeo.services.adapters.base import BaseAdapter
from orthogeo.services.linalg import DenseVector, svd_jacobi

logger = logging.getLogger(__name__)

SPECTRUM_COLUMNS = ["method", "r", "idx", "sigma"]
SUMMARY_COLUMNS = ["method", "r", "effective_rank", "stable_rank", "numerical_rank"]

# Singular values below this fraction of σ_max count as zero.
NUMERICAL_RANK_THRESHOLD = 1e-10


def _positive_spectrum(spectrum: DenseVector) -> np.ndarray:
    s = np.abs(np.asarray(spectrum, dtype=np.float64))
    if s.ndim != 1 or s.size == 0 or not np.any(s > 0.0):
        raise InvalidInput("spectrum needs at least one positive entry")
    return s


def effective_rank(spectrum: DenseVector) -> float:
    """exp of the Shannon entropy of σ / Σσ."""
    s = _positive_spectrum(spectrum)
    p = s / s.sum()
    p = p[p > 0.0]
    return float(np.exp(-np.sum(p * np.log(p))))


def stable_rank(spectrum: DenseVector) -> float:
    """Σσ² / σ_max²."""
    s = _positive_spectrum(spectrum)
    return float(np.sum(s * s) / np.max(s) ** 2)


def numerical_rank(matrix: np.ndarray, threshold: float = NUMERICAL_RANK_THRESHOLD) -> int:
    """Count of singular values above threshold · σ_max."""
    s = svd_jacobi(matrix).s
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > threshold * s[0]))


@dataclass(frozen=True)
class SpectrumRecord:
    method: str
    rank: int
    sigma: np.ndarray             # descending
    effective_rank: float
    stable_rank: float
    numerical_rank: int


def spectrum_record(adapter: BaseAdapter, label: str | None = None) -> SpectrumRecord:
    sigma = adapter.delta_spectrum()
    return SpectrumRecord(
        method=label or adapter.label,
        rank=adapter.rank,
        sigma=sigma,
        effective_rank=effective_rank(sigma),
        stable_rank=stable_rank(sigma),
        numerical_rank=numerical_rank(adapter.delta()),
    )


def spectrum_report(
    adapters: Iterable[BaseAdapter | Tuple[str, BaseAdapter]],
) -> Tuple[List[SpectrumRecord], pd.DataFrame]:
    """
    One record per adapter with a nonzero update, plus the spectrum table.

    Items may be adapters or (label, adapter) pairs.  Zero-update adapters
    are skipped with a warning.
    """
    records: List[SpectrumRecord] = []
    for item in adapters:
        label, adapter = item if isinstance(item, tuple) else (item.label, item)
        if adapter.is_zero_update():
            logger.warning("[Spectrum] %s (r=%d) has a zero update, skipped", label, adapter.rank)
            continue
        records.append(spectrum_record(adapter, label))
    return records, spectrum_frame(records)


def spectrum_frame(records: Iterable[SpectrumRecord]) -> pd.DataFrame:
    rows = [
        {"method": rec.method, "r": rec.rank, "idx": i, "sigma": float(v)}
        for rec in records
        for i, v in enumerate(rec.sigma)
    ]
    return pd.DataFrame(rows, columns=SPECTRUM_COLUMNS)


def spectrum_summary(records: Iterable[SpectrumRecord]) -> pd.DataFrame:
    rows = [
        {
            "method": rec.method,
            "r": rec.rank,
            "effective_rank": rec.effective_rank,
            "stable_rank": rec.stable_rank,
            "numerical_rank": rec.numerical_rank,
        }
        for rec in records
    ]
    return pd.DataFrame(rows, columns=SUMMARY_COLUMNS)


def sigma_svd_gap(adapter: BaseAdapter) -> float:
    """
    Max |delta_spectrum − SVD(ΔW)| over the top r values.

    For OrthoGeo the spectrum comes from σ directly, so this measures how
    exactly the factorization is an SVD.
    """
    reported = np.sort(adapter.delta_spectrum())[::-1]
    composed = svd_jacobi(adapter.delta()).s[: adapter.rank]
    return float(np.max(np.abs(reported - composed)))
