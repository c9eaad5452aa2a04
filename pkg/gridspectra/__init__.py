"""Analytic eigensystems of Laplacians of weighted multidimensional grid graphs."""

__version__ = "1.0.0"
