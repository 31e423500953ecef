"""Exact verification kernel for omni-Lie algebroids on trivialized vector bundles."""

__version__ = "0.1.0"
