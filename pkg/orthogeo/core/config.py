"""
Process configuration — Pydantic Settings.

Loads from .env / ORTHOGEO_* environment variables with strict validation.
Run-level hyperparameters live in ``orthogeo.schemas.run_config``; this
module only holds values that are the same for every run of the process.
"""

from functools import lru_cache

from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Process settings loaded from environment variables."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix="ORTHOGEO_",
        case_sensitive=False,
        extra="ignore",
    )

    # ── Application ──────────────────────────────────────────────
    APP_NAME: str = "orthogeo"

    # ── Artifacts ────────────────────────────────────────────────
    # Parent directory for run directories when --out is not given.
    RUNS_DIR: str = "runs"

    # ── Ablation ─────────────────────────────────────────────────
    # Worker processes for independent ablation cells (1 = sequential).
    ABLATION_WORKERS: int = 1

    # ── Numerical tolerances ─────────────────────────────────────
    GRADCHECK_TOLERANCE: float = 1e-5
    STIEFEL_TOLERANCE: float = 1e-10

    # ── Logging ──────────────────────────────────────────────────
    LOG_LEVEL: str = "INFO"
    LOG_FILE: str = ""

    @field_validator("ABLATION_WORKERS")
    @classmethod
    def _positive_workers(cls, v: int) -> int:
        if v < 1:
            raise ValueError("ABLATION_WORKERS must be >= 1")
        return v

    @field_validator("LOG_LEVEL")
    @classmethod
    def _known_level(cls, v: str) -> str:
        level = v.strip().upper()
        if level not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"Unknown LOG_LEVEL '{v}'")
        return level


@lru_cache
def get_settings() -> Settings:
    """Cached settings singleton."""
    return Settings()


settings = get_settings()
