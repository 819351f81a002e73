"""
RunContext — where one run writes and what it writes.

Created once by ``RunPipeline``; artifact names are fixed so that
reruns of the same config overwrite the same files.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import List

from orthogeo.schemas.run_config import RunConfig

MANIFEST = "manifest.json"
CONVERGENCE = "convergence.csv"
METRICS_CSV = "metrics.csv"
METRICS_JSON = "metrics.json"
CHECKPOINT = "checkpoint.json"
SPECTRUM = "spectrum.csv"
ABLATION = "ablation.csv"


@dataclass
class RunContext:
    config: RunConfig
    out_dir: Path
    written: List[str] = field(default_factory=list)

    def path(self, name: str) -> Path:
        return self.out_dir / name

    def record(self, name: str) -> Path:
        if name not in self.written:
            self.written.append(name)
        return self.path(name)
