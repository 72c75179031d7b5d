"""Disordered emitter ensembles coupled to a single cavity mode.

Spectra, localization diagnostics, level statistics and boundary-driven
transport in the single-excitation subspace.
"""

__version__ = "0.1.0"
