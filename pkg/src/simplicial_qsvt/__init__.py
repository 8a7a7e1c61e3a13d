"""Topological signal processing on clique complexes with a matrix-level QSVT simulator."""

__version__ = "0.1.0"
