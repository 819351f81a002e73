"""Command-line interface — ``python -m orthogeo <command>``."""
