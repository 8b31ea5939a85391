"""Finite bimonoids: validation, complemented completions, fractions and clauses."""

__version__ = "0.1.0"
