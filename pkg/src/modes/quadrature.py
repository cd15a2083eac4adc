"""
src/modes/quadrature.py — Composite Gauss–Legendre quadrature

Integrands are entire on each side of the breakpoint, so a fixed-order
Gauss–Legendre rule per panel converges spectrally. The number of panels
grows with the oscillation/growth rate |λ| of the integrand.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Callable

import numpy as np

from src.core.settings import DEFAULT_SETTINGS, SolverSettings


@lru_cache(maxsize=16)
def gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [−1, 1]."""
    nodes, weights = np.polynomial.legendre.leggauss(order)
    return nodes, weights


def panel_count(rate: float, length: float, settings: SolverSettings = DEFAULT_SETTINGS) -> int:
    return max(1, int(math.ceil(rate * length / settings.panel_phase)))


def composite_nodes(
    lo: float,
    hi: float,
    rate: float = 0.0,
    order: int = DEFAULT_SETTINGS.quadrature_order,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the composite rule on [lo, hi]."""
    if hi <= lo:
        return np.empty(0), np.empty(0)
    nodes, weights = gauss_legendre(order)
    panels = panel_count(rate, hi - lo, settings)
    edges = np.linspace(lo, hi, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    x = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
    w = (half[:, None] * weights[None, :]).ravel()
    return x, w


def integrate(
    fn: Callable[[np.ndarray], np.ndarray],
    lo: float,
    hi: float,
    rate: float = 0.0,
    order: int = DEFAULT_SETTINGS.quadrature_order,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> complex:
    """∫_lo^hi fn(x) dx for a vectorised integrand."""
    x, w = composite_nodes(lo, hi, rate, order, settings)
    if x.size == 0:
        return 0j
    return complex(np.sum(w * fn(x)))
