"""Exact computations with curved algebras, curved coalgebras, bar and cobar."""

__version__ = "0.1.0"
