"""Exact computations in Grassmannian associative geometry."""

__version__ = "0.1.0"
