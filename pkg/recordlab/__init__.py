"""Multivariate records and maxima in the hypercube and the simplex."""

__version__ = "1.0.0"
