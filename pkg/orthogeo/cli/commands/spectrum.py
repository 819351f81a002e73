"""
``orthogeo spectrum`` — singular-value spectra of trained checkpoints.

Writes one long-format spectrum.csv (method, r, idx, sigma) with a
section per checkpoint, plus a summary with effective and stable rank.
Fails (exit 1) when an OrthoGeo σ disagrees with the SVD of its
composed update or its numerical rank is not r.
"""

from __future__ import annotations

import argparse
from pathlib import Path

import numpy as np

from orthogeo.services.analysis import numerical_rank, sigma_svd_gap, spectrum_report, spectrum_summary
from orthogeo.services.orchestrator import load_checkpoint, restore_encoder
from orthogeo.services.orchestrator.context import SPECTRUM
from orthogeo.utils.export import write_csv

SIGMA_SVD_TOLERANCE = 1e-8


def add_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("checkpoints", nargs="+", help="checkpoint.json files")
    parser.add_argument("--out", help="output directory (default: the first checkpoint's directory)")


def run(args: argparse.Namespace) -> int:
    adapters = []
    for path in args.checkpoints:
        _, encoder = restore_encoder(load_checkpoint(path))
        adapters.append(encoder.adapter)

    records, frame = spectrum_report(adapters)
    out_dir = Path(args.out) if args.out else Path(args.checkpoints[0]).parent
    write_csv(frame, out_dir / SPECTRUM)
    summary = spectrum_summary(records)
    write_csv(summary, out_dir / "spectrum_summary.csv")
    print(summary.to_string(index=False))

    failures = []
    for adapter in adapters:
        if adapter.method != "orthogeo" or adapter.is_zero_update():
            continue
        gap = sigma_svd_gap(adapter)
        if gap > SIGMA_SVD_TOLERANCE:
            failures.append(f"{adapter.label} r={adapter.rank}: |σ − svd(ΔW)| = {gap:.3e}")
        rank = numerical_rank(adapter.delta())
        if np.all(adapter.factors().sigma > adapter.params.epsilon) and rank != adapter.rank:
            failures.append(f"{adapter.label} r={adapter.rank}: numerical rank {rank}")

    if failures:
        print("FAILED: " + "; ".join(failures))
        return 1
    return 0
