"""Plurality and Partition search games with k-set queries over three colors."""

__version__ = "0.1.0"
