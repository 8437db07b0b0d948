"""Exact-arithmetic toolkit for Cremona transformations and linearization of varieties."""

__version__ = "0.1.0"
