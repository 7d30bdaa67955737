"""Guessing, analysing and factorizing linear ODEs from truncated series."""

__version__ = "0.1.0"
