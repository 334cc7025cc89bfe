"""Finite-dimensional verification engine for Wightman/GNS/CCR constructions."""

__version__ = "0.1.0"
