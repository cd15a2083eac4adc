"""
src/modes/basis.py — Energy inner products and basis diagnostics

  energy_inner_product   ⟨x₁′, y₁′⟩ + ⟨x₂, y₂⟩ by quadrature split at a
  gram_condition         condition number of the Gram matrix of unit root vectors
  coverage_deficit       distance of the undamped modes ω_j to the computed span
  biorthogonal_system    eigen/adjoint pairs normalised to ⟨φ_m, ψ_n⟩ = δ_mn
  hs_norm                Hilbert–Schmidt norm of A⁻¹ (closed bound vs mode sum)
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg

from src.core.errors import SingularGramError
from src.core.models import (
    BasisMode,
    CoverageReport,
    DampingParams,
    EigenvalueRecord,
    HSNormReport,
    ModeKind,
    SpectralWindow,
    gram_order_key,
)
from src.core.settings import DEFAULT_SETTINGS, SolverSettings
from src.modes.eigenvectors import (
    adjoint_eigenfunction,
    eigenfunction,
    generalized_eigenfunction,
)
from src.modes.functions import ModePair, PiecewiseSinhFn, constant_piece, eigen_pair
from src.modes.quadrature import composite_nodes
from src.spectrum.solver import compute_spectrum

logger = logging.getLogger(__name__)


# ── Undamped modes ─────────────────────────────────────────────────


def basis_mode(mode: BasisMode | int, a: float) -> ModePair:
    """ω_n = (1/(n√π))·sin(nx)·(1, in), written as −i·amp·sinh(inx) on both pieces."""
    if isinstance(mode, int):
        mode = BasisMode(index=mode)
    lam = mode.lam
    coef = -1j * mode.amplitude
    first = PiecewiseSinhFn(
        lam, a, constant_piece("left", coef, "sinh"), constant_piece("left", coef, "sinh")
    )
    return eigen_pair(first)


# ── Inner products ─────────────────────────────────────────────────


def energy_inner_product(
    x: ModePair,
    y: ModePair,
    order: Optional[int] = None,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> complex:
    """⟨x, y⟩ = ∫x₁′·conj(y₁′) + ∫x₂·conj(y₂) over (0, π), split at the breakpoint."""
    if abs(x.breakpoint - y.breakpoint) > 1e-15:
        raise ValueError("modes must share the breakpoint")
    order = order or settings.quadrature_order
    a = x.breakpoint
    rate = abs(x.lam) + abs(y.lam) + 1.0
    total = 0j
    for side, lo, hi in (("left", 0.0, a), ("right", a, math.pi)):
        nodes, weights = composite_nodes(lo, hi, rate, order, settings)
        d1 = x.first.on(side, nodes, 1) * np.conj(y.first.on(side, nodes, 1))
        d2 = x.second.on(side, nodes) * np.conj(y.second.on(side, nodes))
        total += np.sum(weights * (d1 + d2))
    return complex(total)


def energy_norm(x: ModePair, settings: SolverSettings = DEFAULT_SETTINGS) -> float:
    return math.sqrt(max(energy_inner_product(x, x, settings=settings).real, 0.0))


def normalized(x: ModePair, settings: SolverSettings = DEFAULT_SETTINGS) -> ModePair:
    norm = energy_norm(x, settings)
    if norm == 0.0:
        raise SingularGramError("cannot normalise a zero mode")
    return x.scaled(1.0 / norm)


def gram_matrix(modes: list[ModePair], settings: SolverSettings = DEFAULT_SETTINGS) -> np.ndarray:
    """G[i, j] = ⟨ψ_j, ψ_i⟩ (Hermitian)."""
    n = len(modes)
    gram = np.empty((n, n), dtype=complex)
    for i in range(n):
        gram[i, i] = energy_inner_product(modes[i], modes[i], settings=settings)
        for j in range(i + 1, n):
            gram[i, j] = energy_inner_product(modes[j], modes[i], settings=settings)
            gram[j, i] = np.conj(gram[i, j])
    return gram


# ── Root vectors ───────────────────────────────────────────────────


def root_vectors(
    records: list[EigenvalueRecord],
    params: DampingParams,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> list[ModePair]:
    """Unit-norm eigenvectors, plus the generalized eigenvector at double eigenvalues."""
    ordered = sorted(records, key=gram_order_key)
    modes: list[ModePair] = []
    for rec in ordered:
        modes.append(normalized(eigenfunction(rec.lam, params, settings), settings))
        if rec.alg_multiplicity == 2:
            modes.append(normalized(generalized_eigenfunction(rec.lam, params, settings), settings))
    return modes


def ladder_window(params: DampingParams, size: int, re_max: Optional[float] = None) -> SpectralWindow:
    """|Im λ| ≤ size + 1/2 with a real extent covering the strip."""
    re_max = re_max if re_max is not None else max(4.0, 2.0 * abs(params.alpha))
    return SpectralWindow.symmetric(size + 0.5, re_max)


def gram_condition(
    params: DampingParams,
    window: SpectralWindow,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> float:
    """
    2-norm condition number of the Gram matrix of unit root vectors in the window.

    Root vectors are ordered by |Im λ|, then Re λ, then family.

    Raises:
        SingularGramError: the smallest singular value is at rounding level;
            carries the most nearly parallel index pair.
    """
    spectrum = compute_spectrum(params, window, settings=settings)
    modes = root_vectors(spectrum.eigenvalues, params, settings)
    if not modes:
        return 1.0
    gram = gram_matrix(modes, settings)
    sv = scipy.linalg.svdvals(gram)
    if sv[-1] <= settings.gram_singular_tol * sv[0]:
        off = np.abs(gram - np.diag(np.diag(gram)))
        i, j = np.unravel_index(int(np.argmax(off)), off.shape)
        raise SingularGramError(
            f"Gram matrix singular (σ_min/σ_max={sv[-1] / sv[0]:.2e}); nearly parallel modes {i}, {j}",
            pair=(int(min(i, j)), int(max(i, j))),
        )
    cond = float(sv[0] / sv[-1])
    logger.info("Gram condition %.6g for %d root vectors (%s)", cond, len(modes), params.label())
    return cond


def gram_ladder(
    params: DampingParams,
    sizes: tuple[int, ...] = (8, 16, 32, 64),
    re_max: Optional[float] = None,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> dict[int, float]:
    """Gram condition numbers for a ladder of truncation sizes."""
    return {n: gram_condition(params, ladder_window(params, n, re_max), settings) for n in sizes}


def coverage_deficit(
    params: DampingParams,
    truncation: int,
    re_max: Optional[float] = None,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> CoverageReport:
    """
    Squared distance of each ω_j, 0 < |j| ≤ N, to the span of the unit root
    vectors with |Im λ| ≤ N + 1/2.

    dist² = 1 − Re(bᴴc) with G c = b, b_i = ⟨ω_j, ψ_i⟩, solved in the
    least-squares sense so that an ill-conditioned Gram matrix is tolerated.
    """
    if truncation < 1:
        raise ValueError("truncation must be ≥ 1")
    window = ladder_window(params, truncation, re_max)
    spectrum = compute_spectrum(params, window, settings=settings)
    modes = root_vectors(spectrum.eigenvalues, params, settings)
    gram = gram_matrix(modes, settings) if modes else np.zeros((0, 0), dtype=complex)

    distances: list[float] = []
    for j in [*range(-truncation, 0), *range(1, truncation + 1)]:
        omega = basis_mode(j, params.a)
        if not modes:
            distances.append(1.0)
            continue
        b = np.array([energy_inner_product(omega, m, settings=settings) for m in modes])
        c, *_ = scipy.linalg.lstsq(gram, b, cond=1e-12)
        distances.append(float(min(max(1.0 - (np.vdot(c, b)).real, 0.0), 1.0)))

    arr = np.asarray(distances)
    report = CoverageReport(
        truncation=truncation,
        deficit_fraction=float(np.mean(arr > 0.25)),
        max_distance=float(arr.max()),
        distances=distances,
    )
    logger.info(
        "Coverage deficit %.3f (max %.3f) at N=%d (%s)",
        report.deficit_fraction,
        report.max_distance,
        truncation,
        params.label(),
    )
    return report


# ── Biorthogonal pairs ─────────────────────────────────────────────


@dataclass
class BiorthogonalSystem:
    """Unit eigenvectors ψ_n and adjoint partners φ_n scaled so ⟨φ_n, ψ_n⟩ = 1."""

    eigenvalues: list[complex]
    modes: list[ModePair]
    partners: list[ModePair]
    scale_factors: list[complex]

    def pairing_matrix(self, settings: SolverSettings = DEFAULT_SETTINGS) -> np.ndarray:
        """M[m, n] = ⟨φ_m, ψ_n⟩."""
        n = len(self.modes)
        out = np.empty((n, n), dtype=complex)
        for m in range(n):
            for k in range(n):
                out[m, k] = energy_inner_product(self.partners[m], self.modes[k], settings=settings)
        return out

    def residual_norm(self, settings: SolverSettings = DEFAULT_SETTINGS) -> float:
        """Spectral norm of ⟨φ_m, ψ_n⟩ − δ_mn."""
        if not self.modes:
            return 0.0
        m = self.pairing_matrix(settings)
        return float(np.linalg.norm(m - np.eye(len(self.modes)), 2))


def biorthogonal_system(
    records: list[EigenvalueRecord],
    params: DampingParams,
    count: Optional[int] = None,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> BiorthogonalSystem:
    """
    Eigen/adjoint pairs for the simple eigenvalues (first `count` by |Im λ|).

    ψ is normalised to unit energy norm and φ is scaled so that ⟨φ, ψ⟩ = 1;
    the scale factor applied to φ is reported.
    """
    simple = [r for r in sorted(records, key=gram_order_key) if r.alg_multiplicity == 1]
    if count is not None:
        simple = simple[:count]
    modes, partners, factors = [], [], []
    for rec in simple:
        psi = normalized(eigenfunction(rec.lam, params, settings), settings)
        phi = adjoint_eigenfunction(rec.lam, params, settings)
        pairing = energy_inner_product(phi, psi, settings=settings)
        if pairing == 0:
            raise SingularGramError(f"adjoint pairing vanishes at λ={rec.lam}")
        # ⟨cφ, ψ⟩ = c⟨φ, ψ⟩ = 1
        factor = 1.0 / pairing
        phi = phi.scaled(factor)
        modes.append(psi)
        partners.append(ModePair(phi.first, phi.second, phi.lam, ModeKind.ADJOINT))
        factors.append(complex(factor))
    return BiorthogonalSystem([r.lam for r in simple], modes, partners, factors)


# ── Hilbert–Schmidt norm ───────────────────────────────────────────


def hs_norm(params: DampingParams, truncation: int) -> HSNormReport:
    """
    ‖A⁻¹‖²_HS against the mode sum Σ_{0<|n|≤N} ‖A⁻¹ω_n‖².

    (A⁻¹ω_n)₁′ = (1/(n√π))[α sin(na)·∂ₓ𝒢₀(x,a) − i cos(nx)] and
    (A⁻¹ω_n)₂ = sin(nx)/(n√π) give, with ∫(∂ₓ𝒢₀)² = a(π−a)/π and
    ∫∂ₓ𝒢₀(x,a)cos(nx)dx = −sin(na)/n,

        ‖A⁻¹ω_n‖² = (1/(πn²))[|α|²sin²(na)a(π−a)/π + π/2 + 2 Im(α) sin²(na)/n] + 1/(2n²).
    """
    if truncation < 1:
        raise ValueError("truncation must be ≥ 1")
    a, alpha = params.a, params.alpha
    ap = a * (math.pi - a)
    closed = (abs(alpha) * ap / math.pi) ** 2 + math.pi**2 / 3.0
    free = math.pi**2 * (abs(alpha) ** 2 / 16.0 + 1.0 / 3.0)

    n = np.concatenate([np.arange(-truncation, 0), np.arange(1, truncation + 1)]).astype(float)
    s2 = np.sin(n * a) ** 2
    first = (abs(alpha) ** 2 * s2 * ap / math.pi + math.pi / 2.0 + 2.0 * alpha.imag * s2 / n) / (
        math.pi * n**2
    )
    second = 1.0 / (2.0 * n**2)
    truncated = float(np.sum(first + second))
    return HSNormReport(
        closed_bound=closed,
        truncated_sum=truncated,
        a_independent_bound=free,
        truncation=truncation,
    )
