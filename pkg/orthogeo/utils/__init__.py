"""Utility helpers — naming, array codec, file export."""
