"""Birefringence induced by electromagnetic fluctuations in nonlinear media."""

__version__ = "0.1.0"
