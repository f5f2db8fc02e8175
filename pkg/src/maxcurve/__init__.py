"""Maximal curves over finite fields: point counts, Weierstrass orders and classification checks."""

__version__ = "0.1.0"
