"""
src/trace/identities.py — Trace identities

Both sides of the comparison Tr Re A⁻¹ = Σ Re(1/λ):

  trace_re_inverse        −Re α·a(π−a)/π (Re A⁻¹ has rank one)
  spectral_sum_closed     Σ_k m_k·(π/q)·Re((ζ_k+1)/(1−ζ_k)) over nontrivial roots
  spectral_sum_truncated  Σ Re(1/λ) over branches |n| ≤ N plus a tail bound
  critical_correction     ±π(q−r)/q, the gap left at α = ±2

The closed sum rests on the series Σ_n 1/(β² + (γ+n)²), exposed as
poisson_sum.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.special

from src.core.errors import DomainError
from src.core.models import (
    DampingClass,
    DampingParams,
    EigenvalueRecord,
    PoissonParams,
    RootRecord,
)
from src.spectrum.polynomial import validate_placement

PI = math.pi


# ── Trace side ─────────────────────────────────────────────────────


def trace_re_inverse(params: DampingParams) -> float:
    """Tr Re A⁻¹ = −Re(α)(π−a)a/π."""
    a = params.a
    return -params.alpha.real * (PI - a) * a / PI


def trace_re_inverse_graph(n: int, alpha: complex) -> float:
    """Tr Re A_n⁻¹ = −π Re(α)/n on the n-edge star graph."""
    if n < 1:
        raise DomainError(f"edge count must be ≥ 1, got {n}")
    return -PI * complex(alpha).real / n


def classify_damping(alpha: complex) -> DampingClass:
    re = complex(alpha).real
    if re > 0.0:
        return DampingClass.DISSIPATIVE
    if re < 0.0:
        return DampingClass.ACCRETIVE
    return DampingClass.SKEW_ADJOINT


# ── Spectral side ──────────────────────────────────────────────────


def poisson_sum(params: PoissonParams) -> float:
    """
    Σ_{n∈ℤ} 1/(β² + (γ+n)²) = (π/2β)·sinh(2πβ)/(cosh²(πβ) − cos²(πγ)).

    Evaluated as (π/|β|)·tanh(x)/(1 − cos(2πγ)/cosh(x)) with x = 2π|β|,
    which stays finite for large |β|.
    """
    beta = abs(params.beta)
    x = 2.0 * PI * beta
    c = math.cos(2.0 * PI * params.gamma)
    if x > 700.0:
        return PI / beta
    return (PI / beta) * math.tanh(x) / (1.0 - c / math.cosh(x))


def _root_ratio(zeta: complex) -> complex:
    """(ζ + 1)/(1 − ζ)."""
    return (zeta + 1.0) / (1.0 - zeta)


def spectral_sum_closed(roots: list[RootRecord], q: int) -> float:
    """
    Exact Σ Re(1/λ) over all eigenvalues generated by the given roots.

    Raises:
        DomainError: a root at ζ = 1 or ζ = 0 is present, or q < 1.
    """
    if q < 1:
        raise DomainError(f"q must be ≥ 1, got {q}")
    total = 0.0
    for root in roots:
        if root.is_trivial:
            raise DomainError("ζ = 1 generates the imaginary family and must be excluded")
        if root.is_escaped:
            raise DomainError("ζ = 0 generates no finite eigenvalues and must be excluded")
        total += root.multiplicity * (PI / q) * _root_ratio(root.zeta).real
    return total


def localization_constants(
    eigs: list[EigenvalueRecord], q: int, spacing: float = 1.0
) -> tuple[float, float]:
    """
    (c₁, c₂) with |Re λ| ≤ c₁/2 and |Im λ + q·spacing·branch| ≤ c₂/2 over the
    non-imaginary families, both doubled for the tail estimate.
    """
    c1 = c2 = 0.0
    for rec in eigs:
        if rec.family == 1:
            continue
        c1 = max(c1, abs(rec.re))
        c2 = max(c2, abs(rec.im + q * spacing * rec.branch))
    return 2.0 * c1, 2.0 * c2


@dataclass(frozen=True)
class TruncatedSum:
    value: float
    tail_bound: float
    families: int
    c1: float
    c2: float


def tail_bound(c1: float, c2: float, q: float, truncation: int, families: int) -> float:
    """
    families · Σ_{|n|>N} c₁/(qn − c₂)² = families · (2c₁/q²) · ψ₁(N + 1 − c₂/q).
    """
    if c1 == 0.0 or families == 0:
        return 0.0
    shift = truncation + 1.0 - c2 / q
    if shift <= 0.0:
        raise DomainError(f"truncation N={truncation} too small for branch offset {c2:.3g}")
    return families * 2.0 * c1 / q**2 * float(scipy.special.polygamma(1, shift))


def spectral_sum_truncated(
    eigs: list[EigenvalueRecord],
    truncation: int,
    *,
    q: int,
    families: Optional[int] = None,
    c1: Optional[float] = None,
    c2: Optional[float] = None,
    check_branches: bool = True,
    spacing: float = 1.0,
) -> TruncatedSum:
    """
    Σ Re(1/λ) with multiplicity over branches |n| ≤ N, and the tail bound.

    Args:
        eigs: Eigenvalue records with family/branch bookkeeping.
        truncation: N ≥ 1.
        q: Branch spacing of the families (q of a = pπ/q; 1 on the star graph).
        families: Expected number of non-imaginary families; checked when given.
        c1, c2: Localization constants; estimated from eigs when omitted.
        check_branches: Require every family to carry every branch |n| ≤ N.
        spacing: Strip height per branch in units of q (the asymptotic
            spacing for contour spectra whose branches are strip indices).

    Raises:
        DomainError: N < 1, or branch coverage is incomplete.
    """
    if truncation < 1:
        raise DomainError(f"truncation must be ≥ 1, got {truncation}")
    kept = [r for r in eigs if abs(r.branch) <= truncation]

    by_family: dict[int, set[int]] = defaultdict(set)
    weight: dict[int, int] = {}
    for rec in kept:
        if rec.family == 1:
            continue
        by_family[rec.family].add(rec.branch)
        weight[rec.family] = rec.alg_multiplicity

    if families is not None and len(by_family) != families:
        raise DomainError(f"expected {families} non-imaginary families, found {len(by_family)}")
    if check_branches:
        expected = set(range(-truncation, truncation + 1))
        for family, branches in by_family.items():
            missing = expected - branches
            if missing:
                raise DomainError(
                    f"family {family} is missing {len(missing)} branches (e.g. n={min(missing)})"
                )

    lam = np.array([r.lam for r in kept], dtype=complex)
    mult = np.array([r.alg_multiplicity for r in kept], dtype=float)
    value = float(np.sum(mult * (1.0 / lam).real)) if lam.size else 0.0

    est1, est2 = localization_constants(kept, q, spacing)
    c1 = est1 if c1 is None else c1
    c2 = est2 if c2 is None else c2
    weighted_families = sum(weight.values())
    bound = tail_bound(c1, c2, q * spacing, truncation, weighted_families)
    return TruncatedSum(value=value, tail_bound=bound, families=len(by_family), c1=c1, c2=c2)


# ── Criticality ────────────────────────────────────────────────────


def critical_r(p: int, q: int) -> int:
    return max(p, q - p)


def critical_correction(p: int, q: int, sign: int) -> float:
    """
    The gap Σ Re(1/λ) − Tr Re A⁻¹ at α = 2·sign: ±π(q − r)/q with r = max(p, q−p).
    """
    validate_placement(p, q)
    if sign not in (1, -1):
        raise DomainError(f"sign must be ±1, got {sign}")
    return sign * PI * (q - critical_r(p, q)) / q


# ── Taylor coefficient ─────────────────────────────────────────────


def second_derivative_from_roots(roots: list[RootRecord], q: int, r: Optional[int] = None) -> complex:
    """
    F″(0) = (2π²/q)[Σ_k m_k(ζ_k + 1)/(ζ_k − 1) + q − r − 2s].

    Sum over roots other than ζ = 1 and ζ = 0; r is the number of nonzero
    roots counted with multiplicity (q away from criticality) and s the
    multiplicity of ζ = 0. The bracket's tail q − r − 2s is 0 away from
    criticality and ±(q − max(p, q−p)) at α = ±2.
    """
    if r is None:
        r = sum(root.multiplicity for root in roots if not root.is_escaped)
    s = sum(root.multiplicity for root in roots if root.is_escaped)
    total = 0j
    for root in roots:
        if root.is_trivial or root.is_escaped:
            continue
        total -= root.multiplicity * _root_ratio(root.zeta)
    return (2.0 * PI**2 / q) * (total + q - r - 2 * s)


def f2_direct(params: DampingParams) -> complex:
    """F″(0) = 2aα(π − a)."""
    return 2.0 * params.a * params.alpha * (PI - params.a)
