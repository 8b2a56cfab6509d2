"""Greenberg algebras, the Greenberg transform and Weil restriction of affine schemes."""

__version__ = "0.1.0"
