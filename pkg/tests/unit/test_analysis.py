"""
Unit tests for the analysis harnesses (services/analysis).

Coverage:
  - effective_rank / stable_rank / numerical_rank values and invariances
  - spectrum_report: zero-update skip, table layout, σ vs SVD agreement
  - rank_ablation: grid bookkeeping, per-cell failure recording, real runs
  - convergence_frame / mean_curve layout
  - lowrank_fit against the truncated-SVD optimum
  - gradient_oracles suite
"""

from __future__ import annotations

import logging
from unittest.mock import MagicMock, patch

import numpy as np
import pytest

from orthogeo.core.exceptions import InvalidInput
from orthogeo.schemas.run_config import RunConfig
from orthogeo.services.adapters import adapter_engine
from orthogeo.services.analysis import (
    convergence_frame,
    effective_rank,
    gradient_oracles,
    lowrank_fit,
    mean_curve,
    numerical_rank,
    rank_ablation,
    sigma_svd_gap,
    spectral_target,
    spectrum_report,
    spectrum_summary,
    stable_rank,
    truncation_error,
)
from orthogeo.services.analysis.ablation import AGGREGATE_COLUMNS, CELL_COLUMNS, CellResult
from orthogeo.services.bench.trainer import train

TAIL = np.linspace(0.3, 0.05, 16)
TARGET_SIGMA = np.concatenate([[3.0, 2.4, 1.8, 1.2], TAIL])


def _fake_cell(payload):
    return CellResult(payload["method"], payload["rank"], payload["seed"], 0.1 * payload["rank"])


def _make_trained_ortho(rng, d=16, r=4):
    adapter = adapter_engine.create("orthogeo", rng.standard_normal((d, d)), r, 16.0, rng)
    adapter.params.s[:] = rng.standard_normal(r)
    return adapter


# ── Rank summaries ───────────────────────────────────────────────

def test_effective_rank_examples():
    assert effective_rank(np.ones(8)) == pytest.approx(8.0, abs=1e-12)
    assert effective_rank(np.array([1.0, 0.0, 0.0, 0.0])) == pytest.approx(1.0, abs=1e-15)
    assert effective_rank(np.array([2.0, 1.0, 1.0])) == pytest.approx(2.0 * np.sqrt(2.0), abs=1e-12)


def test_effective_rank_scale_invariant_and_bounded(rng):
    sigma = np.abs(rng.standard_normal(6))
    value = effective_rank(sigma)
    assert effective_rank(37.5 * sigma) == pytest.approx(value, rel=1e-12)
    assert 1.0 <= value <= 6.0


def test_effective_rank_rejects_zero_spectrum():
    with pytest.raises(InvalidInput):
        effective_rank(np.zeros(4))


def test_stable_rank_example():
    assert stable_rank(np.array([2.0, 1.0, 1.0])) == pytest.approx(1.5)


def test_numerical_rank(rng):
    low = rng.standard_normal((9, 2)) @ rng.standard_normal((2, 7))
    assert numerical_rank(low) == 2
    assert numerical_rank(np.zeros((3, 3))) == 0


# ── Spectrum report ──────────────────────────────────────────────

def test_spectrum_report_skips_zero_updates(rng, caplog):
    zero = adapter_engine.create("lora", rng.standard_normal((16, 16)), 4, 16.0, rng)
    trained = _make_trained_ortho(rng)
    with caplog.at_level(logging.WARNING, logger="orthogeo.services.analysis.spectrum"):
        records, frame = spectrum_report([zero, ("OrthoGeo-r4", trained)])

    assert [rec.method for rec in records] == ["OrthoGeo-r4"]
    assert "zero update" in caplog.text
    assert list(frame.columns) == ["method", "r", "idx", "sigma"]
    assert list(frame["idx"]) == [0, 1, 2, 3]
    assert (frame["sigma"].diff().dropna() <= 0.0).all()


def test_spectrum_record_rank_guarantee(rng):
    records, _ = spectrum_report([_make_trained_ortho(rng, d=20, r=5)])
    rec = records[0]
    assert rec.numerical_rank == 5
    assert 1.0 <= rec.effective_rank <= 5.0
    summary = spectrum_summary(records)
    assert list(summary.columns) == ["method", "r", "effective_rank", "stable_rank", "numerical_rank"]


def test_sigma_matches_composed_svd(rng):
    for method in ("householder", "cayley"):
        adapter = adapter_engine.create("orthogeo", rng.standard_normal((12, 14)), 4, 16.0, rng,
                                        orth_method=method)
        adapter.params.s[:] = rng.standard_normal(4)
        assert sigma_svd_gap(adapter) <= 1e-8


def test_trained_adapter_keeps_full_numerical_rank(tiny_config):
    run = train(tiny_config)
    assert numerical_rank(run.adapter.delta()) == tiny_config.rank
    assert sigma_svd_gap(run.adapter) <= 1e-8


# ── Rank ablation ────────────────────────────────────────────────

def test_ablation_grid_bookkeeping():
    with patch("orthogeo.services.analysis.ablation._run_cell", side_effect=_fake_cell) as cell:
        result = rank_ablation(RunConfig(), ranks=(2, 4, 8, 16), seeds=(1, 2, 3))

    assert cell.call_count == 24
    assert len(result.records) == 8
    assert list(result.cells.columns) == CELL_COLUMNS
    assert list(result.aggregate.columns) == AGGREGATE_COLUMNS
    assert len(result.cells) == 24
    assert list(result.aggregate["method"]) == ["OrthoGeoLoRA"] * 4 + ["LoRA"] * 4
    assert list(result.aggregate["r"]) == [2, 4, 8, 16] * 2
    assert result.records[0].seed_mrrs == [pytest.approx(0.2)] * 3
    assert result.failed_cells == []


def test_single_rank_single_seed_gives_two_records():
    with patch("orthogeo.services.analysis.ablation._run_cell", side_effect=_fake_cell):
        result = rank_ablation(RunConfig(), ranks=(8,), seeds=(1,))
    assert [(rec.method, rec.rank) for rec in result.records] == [("OrthoGeoLoRA", 8), ("LoRA", 8)]


def test_ablation_records_failed_cells_and_continues():
    def _train(cfg):
        if cfg.rank == 4:
            raise RuntimeError("diverged")
        return MagicMock()

    with patch("orthogeo.services.analysis.ablation.train", side_effect=_train), \
            patch("orthogeo.services.analysis.ablation.rank_split", return_value=None), \
            patch("orthogeo.services.analysis.ablation.mrr", return_value=0.75):
        result = rank_ablation(RunConfig(), ranks=(2, 4), seeds=(1, 2))

    assert len(result.failed_cells) == 4
    assert all("diverged" in msg for *_, msg in result.failed_cells)
    agg = result.aggregate.set_index(["method", "r"])
    assert agg.loc[("LoRA", 2), "mean_mrr"] == 0.75
    assert agg.loc[("LoRA", 4), "n_failed"] == 2
    assert np.isnan(agg.loc[("OrthoGeoLoRA", 4), "mean_mrr"])


def test_ablation_rejects_bad_grid():
    with pytest.raises(InvalidInput):
        rank_ablation(RunConfig(), ranks=(128,), seeds=(1,))
    with pytest.raises(InvalidInput):
        rank_ablation(RunConfig(), ranks=(2,), seeds=(1,), methods=("dora",))


def test_real_ablation_is_reproducible(tiny_config):
    first = rank_ablation(tiny_config, ranks=(2, 3), seeds=(1,))
    second = rank_ablation(tiny_config, ranks=(2, 3), seeds=(1,))
    assert first.cells.equals(second.cells)
    assert first.failed_cells == []
    assert first.cells["mrr"].between(0.0, 1.0).all()


# ── Convergence ──────────────────────────────────────────────────

def test_convergence_frame_layout(tiny_config):
    runs = [train(tiny_config), train(tiny_config.model_copy(update={"method": "lora"}))]
    frame = convergence_frame(runs)
    assert list(frame.columns) == ["method", "seed", "step", "train_loss", "val_mrr"]
    assert len(frame) == 8
    assert set(frame["method"]) == {"OrthoGeoLoRA", "LoRA"}

    curve = mean_curve(frame)
    assert list(curve.columns) == ["method", "step", "val_mrr", "n_seeds"]
    assert (curve["n_seeds"] == 1).all()


def test_convergence_frame_empty():
    assert convergence_frame([]).empty


# ── Low-rank fit ─────────────────────────────────────────────────

def test_truncation_error_matches_tail():
    target = spectral_target(20, TARGET_SIGMA, seed=3)
    assert truncation_error(target, 4) == pytest.approx(np.sqrt(np.sum(TAIL ** 2)), rel=1e-10)


def test_lowrank_fit_reaches_truncated_svd():
    target = spectral_target(20, TARGET_SIGMA, seed=3)
    result = lowrank_fit(target, rank=4, steps=6000, lr=5e-3, seed=0)
    assert result.relative_gap <= 0.01
    assert result.sigma_error <= 1e-2
    assert np.allclose(result.target_sigma, TARGET_SIGMA[:4], atol=1e-10)


def test_spectral_target_rejects_wrong_length():
    with pytest.raises(InvalidInput):
        spectral_target(4, np.ones(3))


# ── Gradient oracles ─────────────────────────────────────────────

def test_gradient_oracles_all_pass():
    frame = gradient_oracles(seed=0)
    assert list(frame.columns) == ["check", "max_error", "worst", "passed"]
    assert len(frame) == 10
    assert frame["passed"].all(), frame.to_string()
    assert frame["max_error"].max() <= 1e-5
