"""Core infrastructure: settings, logging bootstrap, exceptions."""
