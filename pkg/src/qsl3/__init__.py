"""Exact verification toolkit for the elliptic quantum SL(3) family."""

__version__ = "0.1.0"
