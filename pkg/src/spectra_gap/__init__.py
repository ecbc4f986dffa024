"""Certified computations on Markov and Lagrange spectra."""

__version__ = "0.1.0"
