"""Computational checks for flatness, divisibility and duality criteria over Noetherian rings."""

__version__ = "0.1.0"
