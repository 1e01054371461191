"""Numerical laboratory for the complex-forced viscous Burgers equation."""

__version__ = "1.0.0"
