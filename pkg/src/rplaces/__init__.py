"""Exact cuts, ultrametric balls and real places over finitely
represented non-archimedean ordered fields."""

__version__ = "0.1.0"
