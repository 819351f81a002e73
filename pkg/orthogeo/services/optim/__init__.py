"""Euclidean optimization — AdamW and the finite-difference gradient checker."""

from orthogeo.services.optim.adamw import AdamState, adamw_step
from orthogeo.services.optim.gradcheck import GradCheckResult, grad_check

__all__ = ["AdamState", "GradCheckResult", "adamw_step", "grad_check"]
