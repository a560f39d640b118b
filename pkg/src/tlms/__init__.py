"""Exact tools for tropical Lagrangian multi-sections and toric vector bundle transition data."""

__version__ = "0.1.0"
