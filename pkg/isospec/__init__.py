"""Isospectral families of Schrodinger operators from deformed factorizations."""

__version__ = "0.1.0"
