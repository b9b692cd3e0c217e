"""Exact toric computations for one-parameter torus quotients and flips."""

__version__ = "0.1.0"
