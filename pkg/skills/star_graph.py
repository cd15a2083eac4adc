"""
skills/star_graph.py — Spectrum and modes of the damped n-edge star graph.

Wraps src.graph.stargraph.
"""

from src.core.models import EigenvalueRecord, GraphMode, StarConfig
from src.graph.stargraph import graph_modes, graph_spectrum


def spectrum(n: int, alpha: complex, im_max: float = 20.0) -> list[EigenvalueRecord]:
    """Eigenvalues with |Im λ| ≤ im_max."""
    return graph_spectrum(StarConfig(n=n, alpha=alpha), im_max=im_max).eigenvalues


def modes(n: int, alpha: complex, lam: complex) -> list[GraphMode]:
    """Eigenspace basis at λ: balanced profiles on the imaginary family, else the common profile."""
    return graph_modes(lam, StarConfig(n=n, alpha=alpha))
