"""
src/spectrum/rational.py — Eigenvalue families from polynomial roots

Each root ζ of the characteristic polynomial generates a ladder

    λ_{k,n} = −(q/2π)(ln|ζ_k| + i(θ_k + 2πn)),  n ∈ ℤ,

with ζ₁ = 1 giving the purely imaginary family λ_{1,n} = iqn (n ≠ 0).
The same map with q = 1 serves the star graph.
"""

from __future__ import annotations

import logging
import math
from typing import Callable, Optional

from src.core.errors import MultiplicityError
from src.core.models import (
    DampingParams,
    EigenvalueRecord,
    RootRecord,
    SpectralWindow,
    spectrum_order_key,
)
from src.core.settings import DEFAULT_SETTINGS, SolverSettings
from src.spectrum.charfn import characteristic_scale, residual_S, scaled_interval

logger = logging.getLogger(__name__)

ResidualFn = Callable[[complex], float]


def _branch_range(lo: float, hi: float) -> range:
    return range(math.ceil(lo - 1e-12), math.floor(hi + 1e-12) + 1)


def family_eigenvalue(root: RootRecord, q: int, n: int) -> complex:
    """λ_{k,n} for a root ζ_k ≠ 0."""
    return complex(
        -(q / (2.0 * math.pi)) * math.log(root.modulus),
        -(q / (2.0 * math.pi)) * (root.theta + 2.0 * math.pi * n),
    )


def merge_collisions(
    records: list[EigenvalueRecord], settings: SolverSettings = DEFAULT_SETTINGS
) -> list[EigenvalueRecord]:
    """Fold records closer than the merge tolerance into one, adding multiplicities."""
    ordered = sorted(records, key=spectrum_order_key)
    out: list[EigenvalueRecord] = []
    for rec in ordered:
        hit = None
        for j in range(len(out) - 1, -1, -1):
            prev = out[j]
            if rec.im - prev.im > settings.merge_tol * (1.0 + abs(rec.lam)):
                break
            if abs(prev.lam - rec.lam) <= settings.merge_tol * (1.0 + abs(rec.lam)):
                hit = j
                break
        if hit is None:
            out.append(rec)
        else:
            prev = out[hit]
            logger.debug("Eigenvalue collision at %s (families %d, %d)", rec.lam, prev.family, rec.family)
            out[hit] = prev.with_multiplicity(prev.alg_multiplicity + rec.alg_multiplicity)
    return out


def roots_to_eigenvalues(
    roots: list[RootRecord],
    q: int,
    window: SpectralWindow,
    params: Optional[DampingParams] = None,
    residual: Optional[ResidualFn] = None,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> list[EigenvalueRecord]:
    """
    Enumerate every eigenvalue generated by the roots inside the window.

    Args:
        roots: Output of find_roots (ζ = 1 first).
        q: Denominator of the placement (1 for the star graph).
        window: Rectangle to enumerate in.
        params: Interval parameters; when given, residuals are |S(λ)|.
        residual: Alternative residual function (takes precedence over params).

    Returns:
        Records sorted by Im λ then Re λ; double roots and collisions
        carry alg_multiplicity 2. Roots at ζ = 0 generate nothing.
    """
    if residual is None and params is not None:
        residual = lambda lam: residual_S(lam, params, settings)  # noqa: E731

    records: list[EigenvalueRecord] = []
    family = 1
    for root in roots:
        if root.is_escaped:
            logger.info("Root ζ=0 (multiplicity %d) has escaped to Re λ = +∞", root.multiplicity)
            continue
        if root.is_trivial:
            k = 1
            if window.re_min <= 0.0 <= window.re_max:
                for n in _branch_range(window.im_min / q, window.im_max / q):
                    if n == 0:
                        continue
                    records.append(
                        EigenvalueRecord(
                            lam=complex(0.0, q * n),
                            family=k,
                            branch=n,
                            alg_multiplicity=root.multiplicity,
                        )
                    )
            continue

        family += 1
        offset = q * root.theta / (2.0 * math.pi)
        lo = (-window.im_max - offset) / q
        hi = (-window.im_min - offset) / q
        for n in _branch_range(lo, hi):
            lam = family_eigenvalue(root, q, n)
            if not window.contains(lam):
                continue
            records.append(
                EigenvalueRecord(
                    lam=lam,
                    family=family,
                    branch=n,
                    alg_multiplicity=root.multiplicity,
                )
            )

    merged = merge_collisions(records, settings)
    if residual is not None:
        merged = [r.model_copy(update={"residual": residual(r.lam)}) for r in merged]
    return merged


def detect_double_eigenvalues(
    records: list[EigenvalueRecord],
    params: DampingParams,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> list[EigenvalueRecord]:
    """
    Confirm algebraic multiplicities from F, F′ and F″ at each eigenvalue.

    alg_multiplicity is 2 exactly when the scaled |F| and |F′| are both
    below tolerance; |F″| must then stay above its tolerance.

    Raises:
        MultiplicityError: F, F′ and F″ all vanish (an apparent triple root).
    """
    scale = characteristic_scale(params.alpha)
    out: list[EigenvalueRecord] = []
    for rec in records:
        v = scaled_interval(rec.lam, params.a, params.alpha, settings)
        f, f1, f2 = abs(v.f[()]), abs(v.f1[()]), abs(v.f2[()])
        is_double = f <= settings.double_tol * scale and f1 <= settings.double_tol * scale
        if is_double and f2 <= settings.triple_tol * scale:
            raise MultiplicityError(
                f"F, F′ and F″ all vanish at λ={rec.lam:.12g} ({params.label()})"
            )
        alg = 2 if is_double else 1
        if alg != rec.alg_multiplicity:
            logger.warning(
                "Multiplicity at λ=%s revised from %d to %d by the F/F′ test",
                rec.lam,
                rec.alg_multiplicity,
                alg,
            )
        out.append(rec.with_multiplicity(alg))
    return out
