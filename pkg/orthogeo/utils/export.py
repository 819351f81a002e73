"""
Export — DataFrame and model serialization to files.

Single Responsibility: write tabular results as CSV and artifacts as
JSON.  No numerical logic.  Output is byte-stable for identical input.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Mapping

import pandas as pd

# Full round-trip precision for floats in CSV output.
_FLOAT_FORMAT = "%.17g"


def to_csv(df: pd.DataFrame) -> str:
    """Export a DataFrame to a CSV string (header only when empty)."""
    return df.to_csv(index=False, float_format=_FLOAT_FORMAT, lineterminator="\n")


def write_csv(df: pd.DataFrame, path: Path | str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(to_csv(df), encoding="utf-8")
    return path


def write_json(payload: Mapping[str, Any], path: Path | str) -> Path:
    """Write *payload* as indented JSON with sorted keys."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def read_json(path: Path | str) -> Any:
    return json.loads(Path(path).read_text(encoding="utf-8"))
