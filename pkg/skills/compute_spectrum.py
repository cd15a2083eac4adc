"""
skills/compute_spectrum.py — Eigenvalues of the damped wave operator on (0, π).

Wraps src.spectrum.solver.compute_spectrum.
"""

from typing import Optional

from src.core.models import DampingParams, EigenvalueRecord, SpectralWindow
from src.services.config_parser import LiteralParser
from src.spectrum.solver import compute_spectrum

_literals = LiteralParser()


def spectrum(
    placement: str | float,
    alpha: str | complex = 0j,
    im_max: float = 20.0,
    window: Optional[SpectralWindow] = None,
) -> list[EigenvalueRecord]:
    """Eigenvalues with |Im λ| ≤ im_max.

    Args:
        placement: "p/q" for a = pπ/q, or a real a ∈ (0, π).
        alpha: Damping, as a complex number or a literal such as "1+2i".
        im_max: Half-height of the default window.
        window: Explicit window (overrides im_max).

    Returns:
        EigenvalueRecords sorted by Im λ.
    """
    if isinstance(alpha, str):
        alpha = _literals.parse_complex(alpha)
    if isinstance(placement, str):
        params = DampingParams.from_rational(*_literals.parse_fraction(placement), alpha=alpha)
    else:
        params = DampingParams.from_placement(placement, alpha=alpha)
    return compute_spectrum(params, window, im_max).eigenvalues
