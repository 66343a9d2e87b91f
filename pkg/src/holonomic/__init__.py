"""Exact and numerical dynamics of holonomic gates in four-level Lambda systems."""

__version__ = "0.1.0"
