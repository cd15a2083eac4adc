"""
src/trace/report.py — Livšic comparison reports

Assembles a TraceReport for the interval or the star graph:

  1. Tr Re A⁻¹ in closed form
  2. Σ Re(1/λ) in closed form (rational placements) and truncated
  3. gap, critical correction and regime
  4. consistency flags: truncated sum within its tail bound, gap sign
     against the dissipativity class, F″(0) from roots vs directly

The Riesz verdict is the regime rule α ∉ {±critical}. When the computed
gap disagrees with that rule the report is not assembled and
IdentityViolation is raised.
"""

from __future__ import annotations

import logging
import math

from src.core.errors import DomainError, IdentityViolation
from src.core.models import (
    DampingClass,
    DampingParams,
    ModelKind,
    Regime,
    SpectralWindow,
    StarConfig,
    TraceReport,
)
from src.core.settings import DEFAULT_SETTINGS, SolverSettings
from src.graph.stargraph import build_graph_polynomial
from src.spectrum.polynomial import (
    build_polynomial,
    escaped_roots,
    find_roots,
    nontrivial_roots,
)
from src.spectrum.contour import asymptotic_spacing
from src.spectrum.rational import roots_to_eigenvalues
from src.spectrum.solver import contour_spectrum, root_real_extent
from src.trace.identities import (
    classify_damping,
    critical_correction,
    critical_r,
    f2_direct,
    second_derivative_from_roots,
    spectral_sum_closed,
    spectral_sum_truncated,
    trace_re_inverse,
    trace_re_inverse_graph,
)

logger = logging.getLogger(__name__)


def _sign_of(regime: Regime) -> int:
    return 1 if regime == Regime.CRITICAL_PLUS else -1


def _direction_ok(damping: DampingClass, gap: float, tol: float) -> bool:
    """Re α ≥ 0 ⇒ Σ Re(1/λ) ≥ Tr Re A⁻¹; Re α ≤ 0 ⇒ the reverse."""
    if damping == DampingClass.DISSIPATIVE:
        return gap >= -tol
    if damping == DampingClass.ACCRETIVE:
        return gap <= tol
    return abs(gap) <= tol


def _branch_window(q: int, truncation: int, re_extent: float) -> SpectralWindow:
    """Covers every branch |n| ≤ N of every family (|Im λ + qn| ≤ q/2)."""
    return SpectralWindow.symmetric(q * (truncation + 1.0), re_extent + 1.0)


def _check_verdict(gap: float, regime: Regime, tol: float, where: str) -> None:
    vanishes = abs(gap) <= tol
    if vanishes != (regime == Regime.SUBCRITICAL):
        raise IdentityViolation(
            f"{where}: gap {gap:.3e} (tolerance {tol:.1e}) contradicts the {regime.value} regime"
        )


def livsic_report(
    params: DampingParams,
    truncation: int,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> TraceReport:
    """
    Trace comparison for A(a, α) on the interval.

    Rational placements get the closed spectral sum, the gap and the
    critical correction. Irrational placements only get the truncated sum
    over the contour spectrum with |Im λ| ≤ N + 1/2; their verdict comes
    from the regime rule and is flagged rule_based.

    Raises:
        DomainError: N < 1.
        IdentityViolation: the gap contradicts the regime rule, or at
            criticality differs from the critical correction.
    """
    if truncation < 1:
        raise DomainError(f"truncation must be ≥ 1, got {truncation}")
    trace = trace_re_inverse(params)
    damping = classify_damping(params.alpha)
    tol = settings.verdict_tolerance(trace)
    notes: list[str] = []

    if not params.is_rational:
        return _irrational_report(params, truncation, trace, damping, settings)

    p, q = params.rational
    poly = build_polynomial(p, q, params.alpha, settings)
    roots = find_roots(poly, settings)
    regime = poly.regime
    nontrivial = nontrivial_roots(roots)

    closed = spectral_sum_closed(nontrivial, q)
    gap = closed - trace
    _check_verdict(gap, regime, tol, params.label())

    correction = None
    r = None
    if regime != Regime.SUBCRITICAL:
        r = critical_r(p, q)
        correction = critical_correction(p, q, _sign_of(regime))
        if abs(gap - correction) > tol:
            raise IdentityViolation(
                f"{params.label()}: critical gap {gap:.12g} differs from correction {correction:.12g}"
            )

    window = _branch_window(q, truncation, root_real_extent(roots, q))
    eigs = roots_to_eigenvalues(roots, q, window, settings=settings)
    families = sum(1 for root in nontrivial if abs(root.modulus - 1.0) > 1e-12)
    truncated = spectral_sum_truncated(eigs, truncation, q=q, families=len(nontrivial))
    consistent = abs(truncated.value - closed) <= truncated.tail_bound + tol
    if not consistent:
        notes.append(
            f"truncated sum {truncated.value:.12g} is outside tail bound "
            f"{truncated.tail_bound:.3e} of the closed sum {closed:.12g}"
        )

    direction_ok = _direction_ok(damping, gap, tol)
    if not direction_ok:
        notes.append(f"gap {gap:.3e} has the wrong sign for a {damping.value} damping")

    f2_roots = second_derivative_from_roots(roots, q)
    f2_exact = f2_direct(params)
    if abs(f2_roots - f2_exact) > 1e-8 * (1.0 + abs(f2_exact)):
        notes.append(f"F″(0) from roots {f2_roots:.12g} differs from 2aα(π−a) = {f2_exact:.12g}")
    if regime != Regime.SUBCRITICAL:
        notes.append(f"critical damping: {poly.effective_degree} of {q} roots remain finite")

    logger.info(
        "Trace report %s: trace=%.12g sum=%.12g gap=%.3e (%d families off the axis)",
        params.label(),
        trace,
        closed,
        gap,
        families,
    )
    return TraceReport(
        model=ModelKind.INTERVAL,
        trace_re_inverse=trace,
        spectral_sum_closed=closed,
        spectral_sum_truncated=truncated.value,
        tail_bound=truncated.tail_bound,
        gap=gap,
        critical_correction=correction,
        regime=regime,
        riesz_verdict=regime == Regime.SUBCRITICAL,
        r=r,
        truncation=truncation,
        damping_class=damping,
        c1=truncated.c1,
        c2=truncated.c2,
        f2_from_roots=f2_roots,
        f2_direct=f2_exact,
        truncated_consistent=consistent,
        livsic_direction_ok=direction_ok,
        notes=notes,
    )


def _irrational_report(
    params: DampingParams,
    truncation: int,
    trace: float,
    damping: DampingClass,
    settings: SolverSettings,
) -> TraceReport:
    spacing = asymptotic_spacing(params, settings)
    spectrum = contour_spectrum(
        params,
        SpectralWindow.default_for(params.alpha, spacing * (truncation + 0.5)),
        settings=settings,
    )
    regime = spectrum.regime
    # contour ranks are not strip indices; branch n is the strip nearest Im λ = −n·spacing
    records = [
        rec.model_copy(update={"branch": round(-rec.im / spacing)}) for rec in spectrum.eigenvalues
    ]
    truncated = spectral_sum_truncated(
        records, truncation, q=1, check_branches=False, spacing=spacing
    )
    c1, c2, bound = truncated.c1, truncated.c2, truncated.tail_bound
    notes = [
        "irrational placement: no closed spectral sum; verdict follows the regime rule",
    ]
    logger.info(
        "Trace report %s (rule-based): trace=%.12g truncated=%.12g ± %.3e",
        params.label(),
        trace,
        truncated.value,
        bound,
    )
    return TraceReport(
        model=ModelKind.INTERVAL,
        trace_re_inverse=trace,
        spectral_sum_truncated=truncated.value,
        tail_bound=bound,
        regime=regime,
        riesz_verdict=regime == Regime.SUBCRITICAL,
        truncation=truncation,
        damping_class=damping,
        rule_based=True,
        c1=c1,
        c2=c2,
        f2_direct=f2_direct(params),
        notes=notes,
    )


def livsic_report_graph(
    n: int,
    alpha: complex,
    truncation: int,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> TraceReport:
    """
    Trace comparison for A_n(α) on the n-edge star graph.

    The single non-imaginary family comes from ζ₂ = (α+n)/(α−n); it
    disappears at α = ±n, leaving a gap of ±π.

    Raises:
        DomainError: n < 1 or N < 1.
        IdentityViolation: the gap contradicts the regime rule.
    """
    if truncation < 1:
        raise DomainError(f"truncation must be ≥ 1, got {truncation}")
    cfg = StarConfig(n=n, alpha=alpha)
    trace = trace_re_inverse_graph(n, alpha)
    damping = classify_damping(alpha)
    tol = settings.verdict_tolerance(trace)
    poly = build_graph_polynomial(cfg, settings)
    regime = poly.regime

    roots = find_roots(poly, settings)
    nontrivial = nontrivial_roots(roots)
    closed = spectral_sum_closed(nontrivial, 1)
    gap = closed - trace
    _check_verdict(gap, regime, tol, cfg_label(cfg))

    correction = None
    if regime != Regime.SUBCRITICAL:
        correction = _sign_of(regime) * math.pi
        if abs(gap - correction) > tol:
            raise IdentityViolation(
                f"{cfg_label(cfg)}: critical gap {gap:.12g} differs from {correction:.12g}"
            )

    extent = root_real_extent(roots, 1)
    eigs = roots_to_eigenvalues(
        roots, 1, _branch_window(1, truncation, extent), settings=settings
    )
    truncated = spectral_sum_truncated(eigs, truncation, q=1, families=len(nontrivial))
    consistent = abs(truncated.value - closed) <= truncated.tail_bound + tol
    direction_ok = _direction_ok(damping, gap, tol)
    notes: list[str] = []
    if not consistent:
        notes.append(
            f"truncated sum {truncated.value:.12g} is outside tail bound "
            f"{truncated.tail_bound:.3e} of the closed sum {closed:.12g}"
        )
    if not direction_ok:
        notes.append(f"gap {gap:.3e} has the wrong sign for a {damping.value} damping")
    if escaped_roots(roots):
        notes.append("root ζ = 0: the second family has escaped to Re λ = +∞")

    logger.info(
        "Graph trace report %s: trace=%.12g sum=%.12g gap=%.3e", cfg_label(cfg), trace, closed, gap
    )
    return TraceReport(
        model=ModelKind.STAR,
        trace_re_inverse=trace,
        spectral_sum_closed=closed,
        spectral_sum_truncated=truncated.value,
        tail_bound=truncated.tail_bound,
        gap=gap,
        critical_correction=correction,
        regime=regime,
        riesz_verdict=regime == Regime.SUBCRITICAL,
        truncation=truncation,
        damping_class=damping,
        c1=truncated.c1,
        c2=truncated.c2,
        truncated_consistent=consistent,
        livsic_direction_ok=direction_ok,
        notes=notes,
    )


def cfg_label(cfg: StarConfig) -> str:
    return f"n={cfg.n}, α={cfg.alpha:g}"
