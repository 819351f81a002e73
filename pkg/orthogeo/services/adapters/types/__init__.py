"""Concrete adapter kinds — one module per class, resolved by AdapterEngine."""
