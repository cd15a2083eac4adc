"""
src/spectrum/charfn.py — Characteristic functions

S(λ) = (1/λ)(sinh λπ + α sinh λa sinh λ(π−a)) on the interval,
S_n(λ) = (sinh λπ/λ)(n cosh λπ + α sinh λπ) on the n-edge star graph,
and F = λS with its first two derivatives.

Everything is evaluated in scaled form: a mantissa and an exponent with
value = mantissa·e^{exponent}, exponent = |Re λ|·(longest length). Phases
and ratios (argument principle, Newton steps) use the mantissa directly,
so they never overflow. Near λ = 0 the removable singularity of S is
handled by its Taylor series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from src.core.errors import DomainError, OverflowRangeError
from src.core.models import CharValue, DampingParams
from src.core.settings import DEFAULT_SETTINGS, SolverSettings

PI = math.pi
_LOG_MAX = math.log(np.finfo(float).max)


@dataclass(frozen=True)
class ScaledValues:
    """F, F′, F″ (and S) as mantissas sharing one exponent."""

    f: np.ndarray
    f1: np.ndarray
    f2: np.ndarray
    s: np.ndarray
    exponent: np.ndarray


# ── Helpers ────────────────────────────────────────────────────────


def _check_lambda(lam: complex) -> complex:
    lam = complex(lam)
    if not (math.isfinite(lam.real) and math.isfinite(lam.imag)):
        raise DomainError(f"lambda must be finite, got {lam!r}")
    return lam


def unscale(mantissa: complex, exponent: float, settings: SolverSettings = DEFAULT_SETTINGS) -> complex:
    """Return mantissa·e^{exponent}, raising OverflowRangeError past double range."""
    mantissa = complex(mantissa)
    exponent = float(exponent)
    if exponent <= settings.overflow_exponent or mantissa == 0:
        return mantissa * math.exp(exponent)
    log_mag = exponent + math.log(abs(mantissa))
    if log_mag >= _LOG_MAX:
        raise OverflowRangeError(
            f"value of magnitude e^{log_mag:.1f} exceeds double precision range"
        )
    return complex(mantissa / abs(mantissa)) * math.exp(log_mag)


def _scaled_pair(arg: np.ndarray, shift: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(sinh(arg)·e^{-shift}, cosh(arg)·e^{-shift}) without forming e^{|Re arg|}."""
    plus = np.exp(arg - shift)
    minus = np.exp(-arg - shift)
    return 0.5 * (plus - minus), 0.5 * (plus + minus)


def _interval_series_coeffs(a: float, alpha: complex, terms: int) -> np.ndarray:
    """Taylor coefficients c_j of S(λ) = Σ c_j λ^j."""
    b = PI - 2.0 * a
    coeffs = np.empty(terms, dtype=complex)
    for j in range(terms):
        k = j + 1
        if j % 2 == 0:
            coeffs[j] = PI**k / math.factorial(k)
        else:
            coeffs[j] = 0.5 * alpha * (PI**k - b**k) / math.factorial(k)
    return coeffs


def _graph_series_coeffs(n: int, alpha: complex, terms: int) -> np.ndarray:
    """Taylor coefficients of S_n(λ), from λS_n = (n/2)sinh 2λπ + (α/2)(cosh 2λπ − 1)."""
    coeffs = np.empty(terms, dtype=complex)
    for j in range(terms):
        k = j + 1
        weight = (2.0 * PI) ** k / math.factorial(k)
        coeffs[j] = 0.5 * n * weight if j % 2 == 0 else 0.5 * alpha * weight
    return coeffs


# ── Interval model ─────────────────────────────────────────────────


def scaled_interval(
    lam, a: float, alpha: complex, settings: SolverSettings = DEFAULT_SETTINGS
) -> ScaledValues:
    """
    Vectorised scaled evaluation of F = sinh λπ + (α/2)cosh λπ − (α/2)cosh λ(π−2a).

    F′ = π cosh λπ + (α/2)(π sinh λπ − (π−2a) sinh λ(π−2a))
    F″ = π² sinh λπ + (α/2)(π² cosh λπ − (π−2a)² cosh λ(π−2a))

    S = F/λ, replaced by its Taylor series inside the switch radius.
    """
    lam = np.asarray(lam, dtype=complex)
    b = PI - 2.0 * a
    shift = np.abs(lam.real) * PI
    sh, ch = _scaled_pair(lam * PI, shift)
    shb, chb = _scaled_pair(lam * b, shift)
    half = 0.5 * alpha

    f = sh + half * (ch - chb)
    f1 = PI * ch + half * (PI * sh - b * shb)
    f2 = PI**2 * sh + half * (PI**2 * ch - b**2 * chb)

    small = np.abs(lam) < settings.series_radius
    safe = np.where(small, 1.0, lam)
    s = f / safe
    if np.any(small):
        coeffs = _interval_series_coeffs(a, alpha, settings.series_terms)
        series = np.polyval(coeffs[::-1], lam) * np.exp(-shift)
        s = np.where(small, series, s)
    return ScaledValues(f=f, f1=f1, f2=f2, s=s, exponent=shift)


def eval_S(
    lam: complex, params: DampingParams, settings: SolverSettings = DEFAULT_SETTINGS
) -> complex:
    """
    Characteristic function S(λ) of the interval model.

    Raises:
        DomainError: λ is not finite.
        OverflowRangeError: |S(λ)| exceeds double range.
    """
    lam = _check_lambda(lam)
    values = scaled_interval(lam, params.a, params.alpha, settings)
    return unscale(values.s[()], values.exponent[()], settings)


def eval_F_derivatives(
    lam: complex, params: DampingParams, settings: SolverSettings = DEFAULT_SETTINGS
) -> CharValue:
    """S, F, F′ and F″ at λ."""
    lam = _check_lambda(lam)
    v = scaled_interval(lam, params.a, params.alpha, settings)
    e = v.exponent[()]
    return CharValue(
        lam=lam,
        s=unscale(v.s[()], e, settings),
        f=unscale(v.f[()], e, settings),
        f1=unscale(v.f1[()], e, settings),
        f2=unscale(v.f2[()], e, settings),
    )


def residual_S(
    lam: complex, params: DampingParams, settings: SolverSettings = DEFAULT_SETTINGS
) -> float:
    """|S(λ)|, or inf when it is beyond double range."""
    try:
        return abs(eval_S(lam, params, settings))
    except OverflowRangeError:
        return math.inf


def eval_S_via_polynomial(
    lam: complex,
    p: int,
    q: int,
    alpha: complex,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> complex:
    """S(λ) = −(1/4λ)·e^{λπ}·P_α(e^{−2λπ/q}) for the rational placement a = pπ/q."""
    params = DampingParams.from_rational(p, q, alpha)
    lam = _check_lambda(lam)
    if abs(lam) < settings.series_radius:
        return eval_S(lam, params, settings)

    coeffs = np.zeros(q + 1, dtype=complex)
    coeffs[0] = -(2.0 + alpha)
    coeffs[p] += alpha
    coeffs[q - p] += alpha
    coeffs[q] += 2.0 - alpha
    z = np.exp(-2.0 * lam * PI / q)
    with np.errstate(over="raise", invalid="raise"):
        try:
            value = -np.exp(lam * PI) * np.polyval(coeffs[::-1], z) / (4.0 * lam)
        except FloatingPointError as exc:
            raise OverflowRangeError(f"polynomial form overflows at λ={lam}") from exc
    return complex(value)


# ── Star graph ─────────────────────────────────────────────────────


def scaled_graph(
    lam, n: int, alpha: complex, settings: SolverSettings = DEFAULT_SETTINGS
) -> ScaledValues:
    """
    Scaled evaluation of F_n = λS_n = (n/2)sinh 2λπ + (α/2)(cosh 2λπ − 1) and derivatives.
    """
    lam = np.asarray(lam, dtype=complex)
    shift = np.abs(lam.real) * 2.0 * PI
    sh, ch = _scaled_pair(2.0 * PI * lam, shift)
    one = np.exp(-shift)
    tp = 2.0 * PI

    f = 0.5 * n * sh + 0.5 * alpha * (ch - one)
    f1 = tp * (0.5 * n * ch + 0.5 * alpha * sh)
    f2 = tp**2 * (0.5 * n * sh + 0.5 * alpha * ch)

    small = np.abs(lam) < settings.series_radius
    safe = np.where(small, 1.0, lam)
    s = f / safe
    if np.any(small):
        coeffs = _graph_series_coeffs(n, alpha, settings.series_terms)
        s = np.where(small, np.polyval(coeffs[::-1], lam) * one, s)
    return ScaledValues(f=f, f1=f1, f2=f2, s=s, exponent=shift)


def eval_S_graph(
    lam: complex,
    n: int,
    alpha: complex,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> complex:
    """S_n(λ) = (sinh λπ/λ)(n cosh λπ + α sinh λπ), equal to nπ at λ = 0."""
    if n < 1:
        raise DomainError(f"edge count must be ≥ 1, got {n}")
    lam = _check_lambda(lam)
    values = scaled_graph(lam, n, alpha, settings)
    return unscale(values.s[()], values.exponent[()], settings)


def characteristic_scale(alpha: complex, edges: int = 1) -> float:
    """Typical magnitude of the F mantissa, used to make tolerances relative."""
    return PI * (edges + abs(alpha))
