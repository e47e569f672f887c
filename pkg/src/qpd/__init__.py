"""Partitions with designated summands as truncated q-series."""

__version__ = "0.1.0"
