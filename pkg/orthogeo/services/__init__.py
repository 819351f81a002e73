"""Service layer — numerical kernels, adapters, benchmark, metrics, analysis."""
