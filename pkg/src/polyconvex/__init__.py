"""Exact rational convex analysis for polyhedral sets and piecewise linear functions."""

__version__ = "0.1.0"
