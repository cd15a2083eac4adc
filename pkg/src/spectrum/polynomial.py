"""
src/spectrum/polynomial.py — Characteristic polynomials and their roots

For a = pπ/q the characteristic function factors through
P_α(z) = (2−α)z^q + αz^p + αz^{q−p} − (2+α) evaluated at z = e^{−2λπ/q}.
Roots are found by deflating the known root ζ = 1, running a
simultaneous (Aberth–Ehrlich) iteration on the quotient and polishing
with Newton on the undeflated polynomial. Nearby roots are clustered
into double roots.
"""

from __future__ import annotations

import logging
import math

import numpy as np

from src.core.errors import ConvergenceError, DomainError
from src.core.models import DampingPolynomial, Regime, RootRecord
from src.core.settings import DEFAULT_SETTINGS, SolverSettings

logger = logging.getLogger(__name__)

_EPS = np.finfo(float).eps


# ── Regime ─────────────────────────────────────────────────────────


def regime_of(
    alpha: complex, critical: float = 2.0, band: float = DEFAULT_SETTINGS.near_critical_band
) -> Regime:
    """Classify α against the critical constants ±critical (±2 interval, ±n star graph)."""
    if abs(alpha - critical) < band:
        return Regime.CRITICAL_PLUS
    if abs(alpha + critical) < band:
        return Regime.CRITICAL_MINUS
    return Regime.SUBCRITICAL


def effective_alpha(alpha: complex, regime: Regime, critical: float) -> complex:
    """Snap α onto ±critical inside the near-critical band."""
    if regime == Regime.CRITICAL_PLUS:
        return complex(critical)
    if regime == Regime.CRITICAL_MINUS:
        return complex(-critical)
    return complex(alpha)


def _trim(coeffs: np.ndarray) -> np.ndarray:
    nonzero = np.flatnonzero(coeffs)
    return coeffs[: nonzero[-1] + 1]


# ── Construction ───────────────────────────────────────────────────


def validate_placement(p: int, q: int) -> None:
    if not (isinstance(p, (int, np.integer)) and isinstance(q, (int, np.integer))):
        raise DomainError(f"p and q must be integers, got {p!r}/{q!r}")
    if not (0 < p < q):
        raise DomainError(f"rational placement needs 0 < p < q, got {p}/{q}")
    if math.gcd(int(p), int(q)) != 1:
        raise DomainError(f"p and q must be coprime, got {p}/{q}")


def build_polynomial(
    p: int, q: int, alpha: complex, settings: SolverSettings = DEFAULT_SETTINGS
) -> DampingPolynomial:
    """
    Coefficients of P_α for the placement a = pπ/q, ascending degree order.

    At α = 2 the leading coefficient vanishes and the degree drops to
    r = max(p, q−p); near-critical α (within the configured band) is
    snapped onto ±2 first so that the trimming is explicit.

    Raises:
        DomainError: (p, q) is not a coprime pair with 0 < p < q.
    """
    validate_placement(p, q)
    regime = regime_of(alpha, 2.0, settings.near_critical_band)
    alpha_eff = effective_alpha(alpha, regime, 2.0)
    if regime != Regime.SUBCRITICAL:
        logger.warning("α=%s is treated as critical (%s) for degree trimming", alpha, regime.value)

    coeffs = np.zeros(q + 1, dtype=complex)
    coeffs[0] = -(2.0 + alpha_eff)
    coeffs[p] += alpha_eff
    coeffs[q - p] += alpha_eff
    coeffs[q] += 2.0 - alpha_eff
    coeffs = _trim(coeffs)

    return DampingPolynomial(
        coeffs=tuple(complex(c) for c in coeffs),
        alpha=complex(alpha),
        effective_degree=len(coeffs) - 1,
        regime=regime,
        p=int(p),
        q=int(q),
    )


# ── Root finding ───────────────────────────────────────────────────


def synthetic_division(desc: np.ndarray, root: complex) -> tuple[np.ndarray, complex]:
    """Divide a descending-order polynomial by (z − root); returns (quotient, remainder)."""
    out = np.empty(len(desc), dtype=complex)
    acc = 0j
    for k, c in enumerate(desc):
        acc = acc * root + c
        out[k] = acc
    return out[:-1], complex(out[-1])


def _horner_scale(desc: np.ndarray, z: complex) -> float:
    return float(np.polyval(np.abs(desc), abs(z)))


def aberth(desc: np.ndarray, settings: SolverSettings = DEFAULT_SETTINGS) -> np.ndarray:
    """
    All roots of a descending-order polynomial by Aberth–Ehrlich iteration.

    Initial guesses sit on the Cauchy-bound circle |z| = 1 + max|c_k/c_0|,
    rotated off the real axis so that conjugate-symmetric problems do not
    stall. A root is settled once its Newton–Aberth correction is below
    tolerance or its residual is at rounding level.

    Raises:
        ConvergenceError: no convergence within settings.root_max_sweeps sweeps.
    """
    desc = np.asarray(desc, dtype=complex)
    n = len(desc) - 1
    if n <= 0:
        return np.empty(0, dtype=complex)
    if n == 1:
        return np.array([-desc[1] / desc[0]])

    deriv = np.polyder(desc)
    radius = 1.0 + float(np.max(np.abs(desc[1:] / desc[0])))
    angles = 2.0 * math.pi * np.arange(n) / n + 0.4
    z = radius * np.exp(1j * angles)

    for sweep in range(settings.root_max_sweeps):
        settled = True
        for i in range(n):
            zi = z[i]
            pv = np.polyval(desc, zi)
            if abs(pv) <= 4.0 * _EPS * _horner_scale(desc, zi):
                continue
            dpv = np.polyval(deriv, zi)
            repulsion = np.sum(1.0 / (zi - np.delete(z, i)))
            delta = pv / (dpv - pv * repulsion)
            z[i] = zi - delta
            if abs(delta) > settings.root_tol * max(1.0, abs(zi)):
                settled = False
        if settled:
            logger.debug("Aberth converged in %d sweeps (degree %d)", sweep + 1, n)
            return z
    raise ConvergenceError(
        f"Aberth iteration did not converge in {settings.root_max_sweeps} sweeps (degree {n})"
    )


def _newton_polish(poly: DampingPolynomial, z: complex, steps: int = 3) -> complex:
    best, best_res = z, abs(poly.evaluate(z))
    for _ in range(steps):
        d = poly.derivative(best)
        if d == 0:
            break
        candidate = best - poly.evaluate(best) / d
        res = abs(poly.evaluate(candidate))
        if not res < best_res:
            break
        best, best_res = candidate, res
    return complex(best)


def _critical_point(poly: DampingPolynomial, start: complex, steps: int = 30) -> complex:
    """Newton on P′ from start: the location of a double root of P."""
    desc = np.asarray(poly.coeffs[::-1], dtype=complex)
    d1 = np.polyder(desc)
    d2 = np.polyder(d1)
    z = complex(start)
    for _ in range(steps):
        denom = np.polyval(d2, z)
        if denom == 0:
            break
        step = np.polyval(d1, z) / denom
        z -= step
        if abs(step) <= 1e-16 * max(1.0, abs(z)):
            break
    return complex(z)


def _cluster(
    poly: DampingPolynomial, roots: list[complex], settings: SolverSettings
) -> list[tuple[complex, int]]:
    """Merge pairs of nearby roots into double roots located at a zero of P′."""
    remaining = list(roots)
    out: list[tuple[complex, int]] = []
    while remaining:
        z = remaining.pop(0)
        partner = None
        for j, w in enumerate(remaining):
            rel = abs(z - w) / max(1.0, abs(z))
            if rel > settings.root_cluster_reach:
                continue
            mid = 0.5 * (z + w)
            crit = _critical_point(poly, mid)
            moved = abs(crit - mid) / max(1.0, abs(mid))
            on_root = abs(poly.evaluate(crit)) <= (
                settings.root_residual_tol * poly.evaluation_scale(crit)
            )
            if rel <= settings.root_cluster_tol or (
                on_root and moved <= settings.root_cluster_reach
            ):
                partner = j
                z = crit if on_root else mid
                break
        if partner is None:
            out.append((z, 1))
        else:
            remaining.pop(partner)
            out.append((z, 2))
    return out


def find_roots(
    poly: DampingPolynomial, settings: SolverSettings = DEFAULT_SETTINGS
) -> list[RootRecord]:
    """
    All roots of the characteristic polynomial with multiplicities.

    ζ = 1 is deflated exactly and returned first; exact zero roots (the
    constant term vanishes at α = −2 or α = −n) come next; the rest are
    sorted by argument then modulus.

    Raises:
        ConvergenceError: the iteration stalls or a polished root fails the residual bound.
    """
    asc = np.asarray(poly.coeffs, dtype=complex)
    zero_mult = int(np.flatnonzero(asc)[0])
    work = asc[zero_mult:][::-1]

    quotient, remainder = synthetic_division(work, 1.0)
    logger.debug("Deflated ζ=1 with remainder %.3e", abs(remainder))

    raw = aberth(quotient, settings)
    polished = [_newton_polish(poly, complex(z)) for z in raw]
    clustered = _cluster(poly, polished, settings)

    records: list[RootRecord] = [RootRecord.from_zeta(1.0 + 0j)]
    if zero_mult:
        records.append(RootRecord.from_zeta(0j, zero_mult))

    others: list[RootRecord] = []
    for zeta, mult in clustered:
        residual = abs(poly.evaluate(zeta))
        bound = settings.root_residual_tol * poly.evaluation_scale(zeta)
        if residual > bound:
            raise ConvergenceError(
                f"root {zeta:.6g} has residual {residual:.3e} above bound {bound:.3e}"
            )
        others.append(RootRecord.from_zeta(zeta, mult))
    others.sort(key=lambda r: (r.theta, r.modulus))
    records.extend(others)

    logger.debug(
        "Found %d roots of degree-%d polynomial (%d double)",
        len(records),
        poly.effective_degree,
        sum(1 for r in records if r.multiplicity == 2),
    )
    return records


def nontrivial_roots(roots: list[RootRecord]) -> list[RootRecord]:
    """Roots generating non-imaginary families: neither ζ = 1 nor ζ = 0."""
    return [r for r in roots if not r.is_trivial and not r.is_escaped]


def escaped_roots(roots: list[RootRecord]) -> list[RootRecord]:
    return [r for r in roots if r.is_escaped]
