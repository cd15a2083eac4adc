"""
src/spectrum/solver.py — Spectrum front door

Chooses the polynomial-root path for rational placements and the
argument-principle path otherwise, and packages the result together
with the roots, the escaped (ζ = 0) roots and the regime flag.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional

from src.core.models import (
    DampingParams,
    DampingPolynomial,
    EigenvalueRecord,
    Regime,
    RootRecord,
    SpectralWindow,
)
from src.core.settings import DEFAULT_SETTINGS, SolverSettings
from src.spectrum.contour import locate_eigenvalues, stabilized_window
from src.spectrum.polynomial import build_polynomial, escaped_roots, find_roots, regime_of
from src.spectrum.rational import detect_double_eigenvalues, family_eigenvalue, roots_to_eigenvalues

logger = logging.getLogger(__name__)


@dataclass
class SpectrumResult:
    """Eigenvalues in a window plus the data they were derived from."""

    eigenvalues: list[EigenvalueRecord]
    window: SpectralWindow
    regime: Regime
    method: str  # "rational" | "contour" | "graph"
    polynomial: Optional[DampingPolynomial] = None
    roots: list[RootRecord] = field(default_factory=list)
    escaped: list[RootRecord] = field(default_factory=list)

    @property
    def total_multiplicity(self) -> int:
        return sum(r.alg_multiplicity for r in self.eigenvalues)


def root_real_extent(roots: list[RootRecord], q: int) -> float:
    """Largest |Re λ| over the families generated by the roots."""
    extent = 0.0
    for root in roots:
        if root.is_escaped or root.is_trivial:
            continue
        extent = max(extent, abs(family_eigenvalue(root, q, 0).real))
    return extent


def rational_spectrum(
    params: DampingParams,
    window: Optional[SpectralWindow] = None,
    im_max: float = 20.0,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> SpectrumResult:
    """
    Eigenvalues for a = pπ/q from the roots of P_α.

    When no window is given, a symmetric one with |Im λ| ≤ im_max is used
    whose real half-width covers every root family.
    """
    if not params.is_rational:
        raise ValueError("rational_spectrum needs a rational placement")
    p, q = params.rational
    poly = build_polynomial(p, q, params.alpha, settings)
    roots = find_roots(poly, settings)
    if window is None:
        window = SpectralWindow.default_for(
            params.alpha, im_max, re_floor=root_real_extent(roots, q) + 1.0
        )
    records = roots_to_eigenvalues(roots, q, window, params=params, settings=settings)
    records = detect_double_eigenvalues(records, params, settings)
    logger.info("Rational path: %d eigenvalues in %s (%s)", len(records), window, params.label())
    return SpectrumResult(
        eigenvalues=records,
        window=window,
        regime=poly.regime,
        method="rational",
        polynomial=poly,
        roots=roots,
        escaped=escaped_roots(roots),
    )


def contour_spectrum(
    params: DampingParams,
    window: Optional[SpectralWindow] = None,
    im_max: float = 20.0,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> SpectrumResult:
    """
    Eigenvalues by argument-principle counting for any placement.

    Without an explicit window the real extent starts at c₁ = max(4, 2|α|)
    and is widened until the strip count stabilises.
    """
    if window is None:
        window = stabilized_window(
            SpectralWindow.default_for(params.alpha, im_max), params, settings
        )
    records = locate_eigenvalues(window, params, settings)
    return SpectrumResult(
        eigenvalues=records,
        window=window,
        regime=regime_of(params.alpha, 2.0, settings.near_critical_band),
        method="contour",
    )


def compute_spectrum(
    params: DampingParams,
    window: Optional[SpectralWindow] = None,
    im_max: float = 20.0,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> SpectrumResult:
    """Rational placements use polynomial roots; all others use the contour solver."""
    if params.is_rational:
        return rational_spectrum(params, window, im_max, settings)
    return contour_spectrum(params, window, im_max, settings)
