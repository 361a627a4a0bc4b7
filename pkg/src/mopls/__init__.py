"""MOPLS-N: population-based parallel surrogate search for expensive
multi-objective optimization."""

__version__ = "0.1.0"
