"""Feynman periods and Epstein-Glaser residues of primitive graphs."""

__version__ = "0.1.0"
