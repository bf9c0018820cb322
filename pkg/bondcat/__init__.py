"""Bondarenko block-matrix categories, their triangulated quotient and the functor from gentle complexes."""

__version__ = "0.1.0"
