"""Analysis harnesses — spectra, rank ablation, convergence, low-rank fit, gradient oracles."""

from orthogeo.services.analysis.ablation import AblationRecord, AblationResult, rank_ablation
from orthogeo.services.analysis.convergence import convergence_frame, mean_curve
from orthogeo.services.analysis.lowrank_fit import LowRankFitResult, lowrank_fit, spectral_target, truncation_error
from orthogeo.services.analysis.oracles import gradient_oracles
from orthogeo.services.analysis.spectrum import (
    SpectrumRecord,
    effective_rank,
    numerical_rank,
    sigma_svd_gap,
    spectrum_frame,
    spectrum_record,
    spectrum_report,
    spectrum_summary,
    stable_rank,
)

__all__ = [
    "AblationRecord",
    "AblationResult",
    "LowRankFitResult",
    "SpectrumRecord",
    "convergence_frame",
    "effective_rank",
    "gradient_oracles",
    "lowrank_fit",
    "mean_curve",
    "numerical_rank",
    "rank_ablation",
    "sigma_svd_gap",
    "spectral_target",
    "spectrum_frame",
    "spectrum_record",
    "spectrum_report",
    "spectrum_summary",
    "stable_rank",
    "truncation_error",
]
