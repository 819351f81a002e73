"""
Exception hierarchy.

Library code raises these; only ``orthogeo.cli`` turns them into exit
codes (0 success, 1 check failure, 2 input error, 3 runtime abort).
"""

from __future__ import annotations

from typing import Any, Optional


class OrthoGeoError(Exception):
    """Base class for every error raised by the package."""

    exit_code: int = 3


# ── Input errors (exit 2) ────────────────────────────────────────

class InvalidInput(OrthoGeoError):
    """Shape mismatch, non-finite entries or a violated precondition."""

    exit_code = 2


class ConfigError(InvalidInput):
    """A run configuration could not be read or validated."""


class CheckpointError(InvalidInput):
    """A checkpoint file is missing, unreadable or inconsistent."""


class SizeLimitExceeded(InvalidInput):
    """Matrix larger than the small-matrix kernels accept."""


class RankDeficient(InvalidInput):
    """Column-rank test failed during orthogonalization."""

    def __init__(self, column: int, factor: Optional[str] = None) -> None:
        self.column = column
        self.factor = factor
        where = f" in {factor}" if factor else ""
        super().__init__(f"rank-deficient input{where}: column {column} is dependent")

    def with_factor(self, factor: str) -> "RankDeficient":
        return RankDeficient(self.column, factor)


class InvalidSkew(InvalidInput):
    """Cayley input is not skew-symmetric."""


class SingularCayley(InvalidInput):
    """(I + X) is singular."""


class MissingGold(InvalidInput):
    """A query's gold candidate is absent from the candidate set."""


class EmptyRun(InvalidInput):
    """Ranking metrics requested for zero queries."""


# ── Runtime errors (exit 3) ──────────────────────────────────────

class StaleCache(OrthoGeoError):
    """Backward called with a cache from a different parameter state."""


class NonFiniteGradient(OrthoGeoError):
    """NaN or Inf in a gradient tensor."""

    def __init__(self, tensor: str) -> None:
        self.tensor = tensor
        super().__init__(f"non-finite values in gradient of '{tensor}'")


class DegenerateEncoder(OrthoGeoError):
    """Encoder produced a zero vector that cannot be normalized."""


class TrainingAborted(OrthoGeoError):
    """Training stopped on a non-finite loss; carries the last good state."""

    def __init__(self, message: str, last_good: Any = None, step: int = 0) -> None:
        self.last_good = last_good
        self.step = step
        super().__init__(message)
