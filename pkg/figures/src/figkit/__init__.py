"""Panel rendering for the simulation pipeline's CSV tables."""

__version__ = "0.1.0"
