"""Exact GKZ hypergeometric series, secondary fans and instanton numbers."""

__version__ = "0.1.0"
