"""
src/graph/stargraph.py — The damped wave operator on an n-edge star graph

n copies of [0, π] share the vertex x = 0, where u is continuous and
Σ_j u_j′(0) = α v(0); the outer ends are Dirichlet. Eigenvalues come
from P_{n,α}(z) = (n−α)z² + 2αz − (n+α) at z = e^{−2λπ}:

  family 1   λ = ik, k ≠ 0, balanced profiles (Σ w_j = 0), n − 1 of them
  family 2   λ = −(1/2π)(ln|ζ₂| + i(θ₂ + 2πk)), ζ₂ = (α+n)/(α−n)

Family 1 is absent for n = 1 and family 2 is absent at α = ±n.
For n = 2 the graph is the interval with a = π/2 at half the length,
so λ_interval = 2·λ_graph.
"""

from __future__ import annotations

import logging
import math
from typing import Optional

import numpy as np
import scipy.linalg

from src.core.errors import NotAnEigenvalueError, SingularGramError
from src.core.models import (
    DampingParams,
    DampingPolynomial,
    EigenvalueRecord,
    GraphMode,
    Regime,
    SpectralWindow,
    StarConfig,
    gram_order_key,
)
from src.core.settings import DEFAULT_SETTINGS, SolverSettings
from src.modes.quadrature import composite_nodes
from src.spectrum.charfn import characteristic_scale, eval_S_graph, scaled_graph
from src.spectrum.polynomial import effective_alpha, escaped_roots, find_roots, regime_of
from src.spectrum.rational import roots_to_eigenvalues
from src.spectrum.solver import SpectrumResult, root_real_extent

logger = logging.getLogger(__name__)

PI = math.pi


# ── Polynomial ─────────────────────────────────────────────────────


def build_graph_polynomial(
    cfg: StarConfig, settings: SolverSettings = DEFAULT_SETTINGS
) -> DampingPolynomial:
    """P_{n,α} in ascending order; the z² term drops at α = n."""
    n = cfg.n
    regime = regime_of(cfg.alpha, float(n), settings.near_critical_band)
    alpha = effective_alpha(cfg.alpha, regime, float(n))
    if regime != Regime.SUBCRITICAL:
        logger.warning("α=%s is treated as critical (%s) on the %d-star", cfg.alpha, regime.value, n)
    coeffs = [-(n + alpha), 2.0 * alpha, n - alpha]
    if coeffs[-1] == 0:
        coeffs.pop()
    return DampingPolynomial(
        coeffs=tuple(complex(c) for c in coeffs),
        alpha=complex(cfg.alpha),
        effective_degree=len(coeffs) - 1,
        regime=regime,
        n_edges=n,
    )


# ── Spectrum ───────────────────────────────────────────────────────


def _scaled_residual(lam: complex, cfg: StarConfig, settings: SolverSettings) -> float:
    """|S_n(λ)|, reported as inf beyond double range."""
    try:
        return abs(eval_S_graph(lam, cfg.n, cfg.alpha, settings))
    except OverflowError:
        return math.inf


def graph_eigenvalues(
    cfg: StarConfig,
    window: SpectralWindow,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> list[EigenvalueRecord]:
    """
    Eigenvalues of A_n(α) in the window.

    Family-1 records carry algebraic and geometric multiplicity n − 1;
    for n = 1 the family is not part of the spectrum and is dropped.
    """
    return graph_spectrum(cfg, window, settings=settings).eigenvalues


def graph_spectrum(
    cfg: StarConfig,
    window: Optional[SpectralWindow] = None,
    im_max: float = 20.0,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> SpectrumResult:
    """Spectrum of the star graph with roots and the escaped ζ = 0 root, if any."""
    poly = build_graph_polynomial(cfg, settings)
    roots = find_roots(poly, settings)
    if window is None:
        window = SpectralWindow.symmetric(im_max, max(1.0, root_real_extent(roots, 1) + 1.0))

    records = roots_to_eigenvalues(
        roots,
        1,
        window,
        residual=lambda lam: _scaled_residual(lam, cfg, settings),
        settings=settings,
    )
    out: list[EigenvalueRecord] = []
    for rec in records:
        if rec.family != 1:
            out.append(rec)
        elif cfg.n > 1:
            k = cfg.n - 1
            out.append(rec.model_copy(update={"alg_multiplicity": k, "geo_multiplicity": k}))

    escaped = escaped_roots(roots)
    if escaped:
        logger.info("α=−%d: the second family has escaped to infinity", cfg.n)
    logger.info("Star graph n=%d α=%s: %d eigenvalues in %s", cfg.n, cfg.alpha, len(out), window)
    return SpectrumResult(
        eigenvalues=out,
        window=window,
        regime=poly.regime,
        method="graph",
        polynomial=poly,
        roots=roots,
        escaped=escaped,
    )


# ── Modes ──────────────────────────────────────────────────────────


def _on_imaginary_family(lam: complex) -> bool:
    return abs(np.sinh(lam * PI)) <= 1e-9 * max(1.0, abs(np.cosh(lam * PI)))


def balanced_weights(n: int) -> list[tuple[float, ...]]:
    """Orthonormal basis of {w ∈ ℝⁿ : Σ w_j = 0} (Helmert contrasts)."""
    out = []
    for j in range(1, n):
        w = np.zeros(n)
        w[:j] = 1.0
        w[j] = -float(j)
        out.append(tuple(w / np.linalg.norm(w)))
    return out


def _require_graph_eigenvalue(lam: complex, cfg: StarConfig, settings: SolverSettings) -> None:
    v = scaled_graph(lam, cfg.n, cfg.alpha, settings)
    scale = characteristic_scale(cfg.alpha, edges=cfg.n)
    if abs(v.f[()]) > settings.eigen_tol * scale:
        raise NotAnEigenvalueError(
            f"λ={lam} is not an eigenvalue of the {cfg.n}-star (scaled |F|={abs(v.f[()]):.3e})"
        )


def graph_modes(
    lam: complex, cfg: StarConfig, settings: SolverSettings = DEFAULT_SETTINGS
) -> list[GraphMode]:
    """
    A basis of the eigenspace at λ.

    Family 1 gets the n − 1 balanced profiles; family 2 the common profile.

    Raises:
        NotAnEigenvalueError: λ is not in the spectrum, or the vertex
            condition fails.
    """
    lam = complex(lam)
    _require_graph_eigenvalue(lam, cfg, settings)
    if _on_imaginary_family(lam):
        if cfg.n == 1:
            raise NotAnEigenvalueError(f"λ={lam}: the one-edge star has no imaginary family")
        modes = [
            GraphMode(lam=lam, n=cfg.n, alpha=cfg.alpha, edge_weights=w, family=1)
            for w in balanced_weights(cfg.n)
        ]
    else:
        modes = [
            GraphMode(lam=lam, n=cfg.n, alpha=cfg.alpha, edge_weights=(1.0,) * cfg.n, family=2)
        ]
    for mode in modes:
        residual = mode.vertex_residual()
        if residual > settings.jump_tol:
            raise NotAnEigenvalueError(f"vertex condition fails at λ={lam}: residual {residual:.3e}")
    return modes


def graph_mode(
    lam: complex, cfg: StarConfig, settings: SolverSettings = DEFAULT_SETTINGS
) -> GraphMode:
    """The first basis mode of the eigenspace at λ (the common profile off family 1)."""
    return graph_modes(lam, cfg, settings)[0]


def graph_inner_product(
    x: GraphMode, y: GraphMode, settings: SolverSettings = DEFAULT_SETTINGS
) -> complex:
    """Σ_j ∫₀^π x_j′·conj(y_j′) + λ_x x_j·conj(λ_y y_j) dx, edge by edge."""
    nodes, weights = composite_nodes(
        0.0, PI, abs(x.lam) + abs(y.lam) + 1.0, settings.quadrature_order, settings
    )
    dx, dy = x.profile_derivative(nodes), y.profile_derivative(nodes)
    vx, vy = x.lam * x.profile(nodes), y.lam * y.profile(nodes)
    profile = np.sum(weights * (dx * np.conj(dy) + vx * np.conj(vy)))
    edges = np.vdot(
        np.asarray(y.edge_weights, dtype=complex), np.asarray(x.edge_weights, dtype=complex)
    )
    return complex(edges * profile)


def graph_gram_condition(
    cfg: StarConfig,
    window: SpectralWindow,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> float:
    """Condition number of the Gram matrix of unit graph eigenvectors in the window."""
    records = sorted(graph_eigenvalues(cfg, window, settings), key=gram_order_key)
    modes: list[GraphMode] = []
    for rec in records:
        modes.extend(graph_modes(rec.lam, cfg, settings))
    if not modes:
        return 1.0
    norms = [math.sqrt(graph_inner_product(m, m, settings).real) for m in modes]
    size = len(modes)
    gram = np.empty((size, size), dtype=complex)
    for i in range(size):
        for j in range(size):
            gram[i, j] = graph_inner_product(modes[j], modes[i], settings) / (norms[i] * norms[j])
    sv = scipy.linalg.svdvals(gram)
    if sv[-1] <= settings.gram_singular_tol * sv[0]:
        raise SingularGramError(f"star-graph Gram matrix is singular ({cfg.n} edges)")
    return float(sv[0] / sv[-1])


# ── n = 2 reduction ────────────────────────────────────────────────


def interval_counterpart(alpha: complex) -> DampingParams:
    """The interval operator whose spectrum is twice that of the two-edge star."""
    return DampingParams.from_rational(1, 2, alpha)
