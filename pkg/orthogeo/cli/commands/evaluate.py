"""``orthogeo eval`` — one metrics row for a checkpoint."""

from __future__ import annotations

import argparse
from pathlib import Path

import pandas as pd

from orthogeo.services.bench.dataset import Split
from orthogeo.services.metrics import evaluate
from orthogeo.services.orchestrator import load_checkpoint, restore_encoder
from orthogeo.utils.export import to_csv, write_csv, write_json


def add_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("checkpoint", help="checkpoint.json written by train")
    parser.add_argument("--split", choices=[s.value for s in Split], default=Split.TEST.value)
    parser.add_argument("--out", help="output directory (default: the checkpoint's directory)")


def run(args: argparse.Namespace) -> int:
    ckpt = load_checkpoint(args.checkpoint)
    bench, encoder = restore_encoder(ckpt)
    report = evaluate(encoder, bench.dataset, Split(args.split), ckpt.config.ks)

    out_dir = Path(args.out) if args.out else Path(args.checkpoint).parent
    frame = pd.DataFrame([report.to_row()])
    write_csv(frame, out_dir / f"eval_{report.split}.csv")
    write_json(report.model_dump(mode="json"), out_dir / f"eval_{report.split}.json")
    print(to_csv(frame), end="")
    return 0
