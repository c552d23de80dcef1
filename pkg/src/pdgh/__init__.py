"""Bigraded p-differential link homology for colored braid closures."""

__version__ = "0.1.0"
