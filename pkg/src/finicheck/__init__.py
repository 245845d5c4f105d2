"""Exhaustive checker for finite-domain first-order specifications."""

__version__ = "0.1.0"
