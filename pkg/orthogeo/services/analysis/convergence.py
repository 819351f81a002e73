"""Convergence comparison — validation MRR over training steps, long format."""

from __future__ import annotations

from typing import Iterable

import pandas as pd

from orthogeo.services.bench.trainer import TrainedRun

CONVERGENCE_COLUMNS = ["method", "seed", "step", "train_loss", "val_mrr"]


def convergence_frame(runs: Iterable[TrainedRun]) -> pd.DataFrame:
    frames = [
        run.history.assign(method=run.label, seed=run.seed)[CONVERGENCE_COLUMNS]
        for run in runs
    ]
    if not frames:
        return pd.DataFrame(columns=CONVERGENCE_COLUMNS)
    return pd.concat(frames, ignore_index=True)


def mean_curve(frame: pd.DataFrame) -> pd.DataFrame:
    """Mean val MRR per (method, step) over seeds."""
    if frame.empty:
        return pd.DataFrame(columns=["method", "step", "val_mrr", "n_seeds"])
    return (
        frame.groupby(["method", "step"], sort=True)
        .agg(val_mrr=("val_mrr", "mean"), n_seeds=("seed", "nunique"))
        .reset_index()
    )
