"""Spectral stability of symmetric channel flows: Orr-Sommerfeld spectra,
resolvent norms, Airy boundary layers and resolvent-estimate audits."""

__version__ = "0.1.0"

from .grid import build_grid, norms
from .profiles import get_profile, poiseuille, cosine
from .operators import SpectralParams, assemble_os
from .linalg import leftmost, resolvent_norms, sigma_min, op_norm, spectrum
from .sweeps import critical_reynolds, neutral_curve, sup_resolvent, exponent_fit

__all__ = [
    "__version__",
    "build_grid",
    "norms",
    "get_profile",
    "poiseuille",
    "cosine",
    "SpectralParams",
    "assemble_os",
    "leftmost",
    "resolvent_norms",
    "sigma_min",
    "op_norm",
    "spectrum",
    "critical_reynolds",
    "neutral_curve",
    "sup_resolvent",
    "exponent_fit",
]
