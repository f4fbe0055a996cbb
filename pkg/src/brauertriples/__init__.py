"""Modular character triples, projective representations and fake Galois actions."""

__version__ = "0.1.0"
