"""
src/spectrum/contour.py — Argument-principle eigenvalue location

Works for any placement a ∈ (0, π), rational or not:

  count_zeros         winding number of S along a rectangle, by adaptive
                      phase tracking (no contour integral of S′/S)
  locate_eigenvalues  bisect the window by counts, then Newton on F
  newton_refine       Newton with a multiplicity-2 step near double roots

Phases are taken from the scaled mantissa of S, so windows far from the
imaginary axis never overflow.
"""

from __future__ import annotations

import logging
import math

import numpy as np

from src.core.errors import ConvergenceError, MultiplicityError
from src.core.models import (
    DampingParams,
    EigenvalueRecord,
    Regime,
    SpectralWindow,
    spectrum_order_key,
)
from src.core.settings import DEFAULT_SETTINGS, SolverSettings
from src.spectrum.charfn import characteristic_scale, residual_S, scaled_interval
from src.spectrum.polynomial import regime_of
from src.spectrum.rational import detect_double_eigenvalues, merge_collisions

logger = logging.getLogger(__name__)

_SPLIT_FRACTIONS = (0.5, 0.537, 0.463, 0.611, 0.389, 0.271, 0.729)
_NEWTON_TRAVEL = 2.0


class _BoundaryZero(Exception):
    """A zero of S sits on (or too close to) the contour."""


# ── Regime helpers ─────────────────────────────────────────────────


def asymptotic_spacing(params: DampingParams, settings: SolverSettings = DEFAULT_SETTINGS) -> float:
    """
    Asymptotic gap between consecutive eigenvalue imaginary parts.

    1 away from criticality; π/(π − min(a, π−a)) at α = ±2, where one
    eigenvalue family escapes to infinity.
    """
    regime = regime_of(params.alpha, 2.0, settings.near_critical_band)
    if regime == Regime.SUBCRITICAL:
        return 1.0
    if regime_is_flagged(params.alpha, settings):
        logger.warning("α=%s is near-critical; transition behaviour is not modelled", params.alpha)
    return math.pi / (math.pi - min(params.a, math.pi - params.a))


def regime_is_flagged(alpha: complex, settings: SolverSettings = DEFAULT_SETTINGS) -> bool:
    """True when α sits inside the near-critical band without being exactly ±2."""
    return any(0.0 < abs(alpha - c) < settings.near_critical_band for c in (2.0, -2.0))


# ── Winding numbers ────────────────────────────────────────────────


def _phase_samples(points: np.ndarray, params: DampingParams, settings: SolverSettings):
    v = scaled_interval(points, params.a, params.alpha, settings)
    magnitude = np.abs(v.s) * np.maximum(np.abs(points), 1.0)
    return v.s, magnitude


def _edge_phase(
    z0: complex, z1: complex, params: DampingParams, settings: SolverSettings
) -> float:
    """Total change of arg S along the segment z0 → z1."""
    floor = settings.boundary_tol * characteristic_scale(params.alpha)
    length = abs(z1 - z0)
    ts = np.linspace(0.0, 1.0, max(16, int(math.ceil(8.0 * length))) + 1)
    vals, mags = _phase_samples(z0 + ts * (z1 - z0), params, settings)

    while True:
        if np.min(mags) <= floor:
            raise _BoundaryZero(f"|S| below {floor:.1e} on segment {z0}→{z1}")
        steps = np.angle(vals[1:] / vals[:-1])
        bad = np.abs(steps) >= 0.5 * math.pi
        if not np.any(bad):
            return float(np.sum(steps))
        if len(ts) + int(np.count_nonzero(bad)) > settings.max_edge_points:
            raise _BoundaryZero(f"phase tracking exceeded {settings.max_edge_points} points")
        mids = 0.5 * (ts[:-1][bad] + ts[1:][bad])
        new_vals, new_mags = _phase_samples(z0 + mids * (z1 - z0), params, settings)
        ts = np.concatenate([ts, mids])
        order = np.argsort(ts, kind="stable")
        ts = ts[order]
        vals = np.concatenate([vals, new_vals])[order]
        mags = np.concatenate([mags, new_mags])[order]


def _winding(window: SpectralWindow, params: DampingParams, settings: SolverSettings) -> int:
    corners = window.corners()
    total = sum(
        _edge_phase(corners[i], corners[(i + 1) % 4], params, settings) for i in range(4)
    )
    turns = total / (2.0 * math.pi)
    count = round(turns)
    if abs(turns - count) > 0.1 or count < 0:
        raise _BoundaryZero(f"non-integral winding {turns:.4f}")
    return int(count)


def _count_with_window(
    window: SpectralWindow, params: DampingParams, settings: SolverSettings
) -> tuple[int, SpectralWindow]:
    current = window
    for attempt in range(settings.max_dilations + 1):
        try:
            return _winding(current, params, settings), current
        except _BoundaryZero as exc:
            factor = settings.dilation_factor ** (attempt + 1)
            logger.warning("Boundary zero (%s); dilating window by %.4f", exc, factor)
            current = window.dilated(factor)
    raise ConvergenceError(
        f"zero on the contour persists after {settings.max_dilations} dilations of {window}"
    )


def count_zeros(
    window: SpectralWindow, params: DampingParams, settings: SolverSettings = DEFAULT_SETTINGS
) -> int:
    """
    Number of zeros of S inside the window, counted with multiplicity.

    Raises:
        ConvergenceError: a zero stays on the boundary after the maximum
            number of dilations, or phase tracking cannot be resolved.
    """
    count, _ = _count_with_window(window, params, settings)
    return count


def stabilized_window(
    window: SpectralWindow, params: DampingParams, settings: SolverSettings = DEFAULT_SETTINGS
) -> SpectralWindow:
    """Double the real extent until the zero count stops changing."""
    current = window
    count = count_zeros(current, params, settings)
    for _ in range(settings.max_window_doublings):
        wider = current.widened(2.0)
        wider_count = count_zeros(wider, params, settings)
        if wider_count == count:
            return current
        logger.debug("Strip count grew %d → %d; widening real extent", count, wider_count)
        current, count = wider, wider_count
    logger.warning("Strip count did not stabilise after %d doublings", settings.max_window_doublings)
    return current


# ── Newton ─────────────────────────────────────────────────────────


def _classify(lam: complex) -> int:
    return 1 if abs(lam.real) <= 1e-9 * (1.0 + abs(lam)) else 2


def _polish_double(
    lam: complex, params: DampingParams, settings: SolverSettings, steps: int = 8
) -> complex:
    """Newton on F′ from a converged double root; F alone only fixes it to √ε."""
    best = lam
    v = scaled_interval(best, params.a, params.alpha, settings)
    best_f1 = abs(complex(v.f1[()]))
    for _ in range(steps):
        f1, f2 = complex(v.f1[()]), complex(v.f2[()])
        if f2 == 0:
            break
        candidate = best - f1 / f2
        v = scaled_interval(candidate, params.a, params.alpha, settings)
        res = abs(complex(v.f1[()]))
        if not res < best_f1:
            break
        best, best_f1 = candidate, res
    return best


def newton_refine(
    seed: complex, params: DampingParams, settings: SolverSettings = DEFAULT_SETTINGS
) -> EigenvalueRecord:
    """
    Newton iteration on F = λS from seed.

    The multiplicity estimate F′²/(F′² − F F″) switches the step to
    2F/F′ near a double root, which restores quadratic convergence.

    Raises:
        ConvergenceError: the iterate escapes, stalls, reaches the spurious
            root λ = 0 of F, or exceeds settings.newton_max_iter iterations.
    """
    seed = complex(seed)
    scale = characteristic_scale(params.alpha)
    lam = seed
    multiplicity = 1
    for it in range(1, settings.newton_max_iter + 1):
        v = scaled_interval(lam, params.a, params.alpha, settings)
        f, f1, f2 = complex(v.f[()]), complex(v.f1[()]), complex(v.f2[()])
        if abs(f) <= settings.newton_tol * scale:
            break
        denom = f1 * f1 - f * f2
        multiplicity = 2 if denom != 0 and (f1 * f1 / denom).real > 1.5 else 1
        if f1 == 0:
            raise ConvergenceError(f"F′ vanishes at non-root λ={lam} (seed {seed})")
        step = multiplicity * f / f1
        lam = lam - step
        if not (math.isfinite(lam.real) and math.isfinite(lam.imag)):
            raise ConvergenceError(f"Newton diverged from seed {seed}")
        if abs(lam - seed) > _NEWTON_TRAVEL * (1.0 + 0.1 * abs(seed)):
            raise ConvergenceError(f"Newton escaped from seed {seed} to {lam}")
        logger.debug("Newton it=%d λ=%s |F|=%.3e m=%d", it, lam, abs(f), multiplicity)
    else:
        raise ConvergenceError(
            f"Newton did not converge from seed {seed} in {settings.newton_max_iter} iterations"
        )

    if abs(lam) < settings.series_radius:
        raise ConvergenceError(f"Newton converged to the removable root λ=0 from seed {seed}")
    if multiplicity == 2:
        lam = _polish_double(lam, params, settings)
    return EigenvalueRecord(
        lam=lam,
        family=_classify(lam),
        branch=0,
        alg_multiplicity=multiplicity,
        residual=residual_S(lam, params, settings),
        iterations=it,
    )


# ── Location ───────────────────────────────────────────────────────


def _split_counted(
    cell: SpectralWindow, count: int, params: DampingParams, settings: SolverSettings
) -> list[tuple[SpectralWindow, int]]:
    for fraction in _SPLIT_FRACTIONS:
        first, second = cell.split(fraction)
        try:
            first_count = _winding(first, params, settings)
        except _BoundaryZero:
            logger.debug("Split at %.3f touches a zero; shifting the cut", fraction)
            continue
        if 0 <= first_count <= count:
            return [(first, first_count), (second, count - first_count)]
    raise ConvergenceError(f"could not split {cell} without touching a zero")


def _refine_in_cell(
    cell: SpectralWindow, params: DampingParams, settings: SolverSettings
) -> EigenvalueRecord:
    c = cell.center
    dx, dy = 0.25 * cell.width, 0.25 * cell.height
    starts = (c, c + dx, c - dx, c + 1j * dy, c - 1j * dy)
    pad = 1e-9 * (1.0 + abs(c))
    for start in starts:
        try:
            rec = newton_refine(start, params, settings)
        except ConvergenceError as exc:
            logger.debug("Newton restart in %s: %s", cell, exc)
            continue
        if cell.contains(rec.lam, pad):
            return rec
        logger.debug("Newton left its cell: %s ∉ %s", rec.lam, cell)
    raise ConvergenceError(f"Newton could not locate the zero counted in {cell}")


def _refine_unsplittable(
    cell: SpectralWindow, count: int, params: DampingParams, settings: SolverSettings
) -> EigenvalueRecord:
    """
    Newton inside a cell whose every cut passes next to a zero.

    The counted multiplicity is kept; detect_double_eigenvalues confirms it.
    """
    rec = _refine_in_cell(cell, params, settings)
    if count == 2 and rec.alg_multiplicity == 1:
        lam = _polish_double(rec.lam, params, settings)
        rec = rec.model_copy(update={"lam": lam, "residual": residual_S(lam, params, settings)})
    logger.debug("Unsplittable cell %s resolved by Newton at %s", cell, rec.lam)
    return rec.with_multiplicity(count)


def _assign_branches(records: list[EigenvalueRecord]) -> list[EigenvalueRecord]:
    """Signed rank by imaginary part: 1, 2, … above the real axis, −1, −2, … below."""
    upper = sorted((r for r in records if r.im > 0), key=lambda r: (r.im, r.re))
    lower = sorted((r for r in records if r.im < 0), key=lambda r: (-r.im, r.re))
    axis = [r for r in records if r.im == 0]
    out = [r.model_copy(update={"branch": i + 1}) for i, r in enumerate(upper)]
    out += [r.model_copy(update={"branch": -(i + 1)}) for i, r in enumerate(lower)]
    out += axis
    return sorted(out, key=spectrum_order_key)


def locate_eigenvalues(
    window: SpectralWindow, params: DampingParams, settings: SolverSettings = DEFAULT_SETTINGS
) -> list[EigenvalueRecord]:
    """
    All eigenvalues inside the window with multiplicities.

    Cells are bisected across their longest side until each holds at most
    one zero and is small; a cell that still holds two zeros when it has
    shrunk to settings.min_cell_size is polished as a double root.

    Raises:
        ConvergenceError: counting or Newton fails.
        MultiplicityError: more than two zeros collapse onto one point.
    """
    total, root_window = _count_with_window(window, params, settings)
    logger.info("Window %s holds %d eigenvalues (%s)", root_window, total, params.label())

    stack: list[tuple[SpectralWindow, int, int]] = [(root_window, total, 0)]
    found: list[EigenvalueRecord] = []
    while stack:
        cell, count, depth = stack.pop()
        if count == 0:
            continue
        side = max(cell.width, cell.height)
        tiny = side <= settings.min_cell_size * (1.0 + abs(cell.center))
        if count == 1 and side <= settings.cell_size:
            found.append(_refine_in_cell(cell, params, settings))
            continue
        if tiny:
            if count > 2:
                raise MultiplicityError(f"{count} zeros collapse inside {cell}")
            rec = _refine_in_cell(cell, params, settings)
            found.append(rec.with_multiplicity(count))
            continue
        logger.debug("Bisecting cell at depth %d holding %d zeros", depth, count)
        try:
            children = _split_counted(cell, count, params, settings)
        except ConvergenceError:
            if count > 2:
                raise
            found.append(_refine_unsplittable(cell, count, params, settings))
            continue
        for child, child_count in children:
            stack.append((child, child_count, depth + 1))

    records = merge_collisions(found, settings)
    records = detect_double_eigenvalues(records, params, settings)
    located = sum(r.alg_multiplicity for r in records)
    if located != total:
        raise ConvergenceError(f"located multiplicity {located} differs from count {total}")
    if root_window is not window:
        pad = settings.boundary_tol * (1.0 + max(abs(c) for c in window.corners()))
        records = [r for r in records if window.contains(r.lam, pad)]
    return _assign_branches(records)
