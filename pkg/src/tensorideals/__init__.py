"""Exact diagram calculus, tensor-ideal classification and a Schur-Weyl matrix oracle."""

__version__ = "0.1.0"
