"""Finite-sample toolkit for complete Nevanlinna-Pick kernels and de Branges-Rovnyak spaces."""

__version__ = "0.1.0"
