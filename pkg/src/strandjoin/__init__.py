"""Strands algebras, A-infinity bimodules over Z/2, and algebraic join/gluing maps."""

__version__ = "0.1.0"
