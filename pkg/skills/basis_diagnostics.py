"""
skills/basis_diagnostics.py — Gram condition numbers and undamped-mode coverage.

Wraps src.modes.basis.
"""

from src.core.models import CoverageReport, DampingParams
from src.modes.basis import coverage_deficit, gram_ladder


def gram_trend(
    p: int, q: int, alpha: complex, sizes: tuple[int, ...] = (8, 16, 32, 64)
) -> dict[int, float]:
    """Gram condition number per truncation size for a = pπ/q."""
    return gram_ladder(DampingParams.from_rational(p, q, alpha), sizes)


def coverage(p: int, q: int, alpha: complex, truncation: int = 16) -> CoverageReport:
    """Distances of the undamped modes ω_j, |j| ≤ N, to the computed root vectors."""
    return coverage_deficit(DampingParams.from_rational(p, q, alpha), truncation)
