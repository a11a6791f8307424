"""Numerical holomorphic extension of separately analytic functions to wedges.

Submodules: geometry (domains), taylor (truncated series), harmonic (Poisson
kernels, Hilbert transform, coefficient-bound verifier), edgewedge (analytic
discs and the boundary-value identity), continuation (slab scan, seed,
certified march, wedge assembly), gallery (built-in oracles and detectors),
cli (command-line front end).
"""

from . import continuation, edgewedge, gallery, geometry, harmonic, taylor

__all__ = ["continuation", "edgewedge", "gallery", "geometry", "harmonic", "taylor"]
__version__ = "0.1.0"
