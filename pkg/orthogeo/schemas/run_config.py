"""
RunConfig — every hyperparameter of one benchmark run.

A run is fully described by this model: the manifest stores its dump
and re-ingesting that dump reproduces the run bit-identically.
"""

from __future__ import annotations

from typing import List, Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from orthogeo.services.reparam import InitScheme, OrthMethod, SigmaMode


class RunConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", use_enum_values=False)

    # ── Adapter ──────────────────────────────────────────────────
    method:       Literal["orthogeo", "lora"] = "orthogeo"
    rank:         int = Field(8, ge=1)
    alpha:        float = Field(16.0, gt=0.0)
    sigma_mode:   SigmaMode = SigmaMode.SOFTPLUS
    epsilon:      float = Field(1e-6, ge=0.0)
    orth_method:  OrthMethod = OrthMethod.HOUSEHOLDER
    init_scheme:  InitScheme = InitScheme.GAUSSIAN

    # ── Encoder ──────────────────────────────────────────────────
    d_feat:       int = Field(64, ge=1)
    d_emb:        int = Field(64, ge=1)
    temperature:  float = Field(0.05, gt=0.0)

    # ── Optimizer ────────────────────────────────────────────────
    lr:           float = Field(1e-4, ge=0.0)
    beta1:        float = Field(0.9, gt=0.0, lt=1.0)
    beta2:        float = Field(0.999, gt=0.0, lt=1.0)
    eps_adam:     float = Field(1e-8, gt=0.0)
    weight_decay: float = Field(0.01, ge=0.0)
    batch_size:   int = Field(128, ge=1)
    # OrthoGeo step multipliers.  At 1, Θ (N(0, 1) init) turns its span by about
    # lr radians per step and s changes σ by a factor of about e^lr.
    theta_lr_scale: float = Field(30.0, gt=0.0)
    sigma_lr_scale: float = Field(300.0, gt=0.0)

    # ── Dataset ──────────────────────────────────────────────────
    depth:        int = Field(3, ge=1)
    branching:    int = Field(5, ge=2)
    gamma:        float = Field(0.5, ge=0.0)
    per_concept:  int = Field(24, ge=3)
    noise:        float = Field(0.6, ge=0.0)
    mix:          float = Field(0.3, ge=0.0, le=1.0)
    data_seed:    int = Field(0, ge=0)

    # ── Schedule ─────────────────────────────────────────────────
    seed:             int = Field(1, ge=0)
    max_steps:        int = Field(3000, ge=0)
    eval_interval:    int = Field(50, ge=1)
    patience:         int = Field(5, ge=1)
    min_delta:        float = Field(1e-4, ge=0.0)
    stiefel_interval: int = Field(100, ge=1)
    ks:               List[int] = Field(default_factory=lambda: [1, 3])

    @field_validator("ks")
    @classmethod
    def _valid_cutoffs(cls, v: List[int]) -> List[int]:
        if not v or any(k < 1 for k in v):
            raise ValueError("ks must be a non-empty list of cutoffs >= 1")
        return sorted(set(v))

    @model_validator(mode="after")
    def _check_shapes(self) -> "RunConfig":
        if self.rank > min(self.d_feat, self.d_emb):
            raise ValueError(
                f"rank {self.rank} exceeds min(d_feat, d_emb) = {min(self.d_feat, self.d_emb)}"
            )
        if self.method == "orthogeo" and self.sigma_mode is SigmaMode.SOFTPLUS and not self.epsilon > 0.0:
            raise ValueError("epsilon must be > 0 in softplus mode")
        return self

    # ── Derived views ────────────────────────────────────────────

    def adapter_options(self) -> dict:
        """Keyword options for AdapterEngine.create / restore."""
        if self.method == "lora":
            return {}
        return {
            "sigma_mode": self.sigma_mode,
            "epsilon": self.epsilon,
            "orth_method": self.orth_method,
            "init_scheme": self.init_scheme,
        }

    def lr_group_scales(self) -> dict:
        """Learning-rate multipliers per adapter tensor group (LoRA has no groups)."""
        return {"theta": self.theta_lr_scale, "sigma": self.sigma_lr_scale}

    def optimizer_options(self) -> dict:
        return {
            "lr": self.lr,
            "beta1": self.beta1,
            "beta2": self.beta2,
            "eps_adam": self.eps_adam,
            "weight_decay": self.weight_decay,
        }
