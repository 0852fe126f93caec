"""Compression-distance nearest-neighbour image classification."""

__version__ = "0.1.0"
