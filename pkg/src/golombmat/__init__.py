"""Pseudo-random symmetric sign matrices built from binary m-sequences."""

__version__ = "0.1.0"
