"""
src/core/settings.py — Numerical tolerances

All solver constants live here so that a run can be reproduced from a
single frozen object. Callers that pass no settings get DEFAULT_SETTINGS.
"""

from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class SolverSettings:
    """Tolerances and iteration caps shared by every solver module."""

    # Characteristic function
    series_radius: float = 1e-2  # |λ| below this → Taylor series for S
    series_terms: int = 12
    overflow_exponent: float = 700.0  # |Re λ|·π above this → log-domain unscaling

    # Polynomial roots
    root_max_sweeps: int = 500
    root_tol: float = 1e-14
    root_cluster_tol: float = 1e-7  # relative ζ distance merged unconditionally
    root_cluster_reach: float = 1e-4  # relative ζ distance merged if P′ also vanishes
    root_residual_tol: float = 1e-10
    near_critical_band: float = 1e-9

    # Eigenvalue multiplicity (scaled F, F′, F″)
    double_tol: float = 1e-9
    triple_tol: float = 1e-3
    eigen_tol: float = 1e-7  # |S| relative tolerance for "is an eigenvalue"
    merge_tol: float = 1e-8

    # Contour counting
    dilation_factor: float = 1.0 + 1e-3
    max_dilations: int = 8
    max_edge_points: int = 2**14
    boundary_tol: float = 1e-9
    cell_size: float = 0.25  # count-1 cells are bisected down to this side length
    min_cell_size: float = 1e-7
    max_window_doublings: int = 6

    # Newton
    newton_tol: float = 1e-12
    newton_max_iter: int = 60

    # Quadrature
    quadrature_order: int = 32
    panel_phase: float = 6.0  # max |λ|·(panel width) per Gauss–Legendre panel

    # Modes
    jump_tol: float = 1e-7
    generalized_tol: float = 1e-8
    pole_tol: float = 1e-10
    gram_singular_tol: float = 1e-14

    # Trace report
    verdict_abs_tol: float = 1e-8
    verdict_rel_tol: float = 1e-6

    def with_overrides(self, **changes) -> "SolverSettings":
        """Return a copy with selected fields replaced."""
        return replace(self, **changes)

    def verdict_tolerance(self, trace: float) -> float:
        return max(self.verdict_abs_tol, self.verdict_rel_tol * abs(trace))


DEFAULT_SETTINGS = SolverSettings()
