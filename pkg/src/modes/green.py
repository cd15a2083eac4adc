"""
src/modes/green.py — Green kernel and resolvent

For λ in the resolvent set the Green function of the damped problem is

    𝒢_λ(x, y) = −u₁(min(x,y))·u₂(max(x,y)) / u₁(π)

with the shooting solutions
    u₁ = sinh(λx)/λ                                      on [0, a]
    u₁ = −C·sinh(λt)/λ + S(λ)·cosh(λt),  t = π − x,      on [a, π]
    u₂ = sinh(λ(π−x))/λ                                 on [a, π]
    u₂ = sinh(λ(π−x))/λ − αλ·u₂(a)·sinh(λ(x−a))/λ       on [0, a]
where C = cosh λπ + α sinh λa cosh λ(π−a). u₁(π) = S(λ), and at λ = 0
everything reduces to u₁ = x, u₂ = π − x, 𝒢₀ = −x(π−y)/π for x ≤ y.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from src.core.errors import PoleError
from src.core.models import DampingParams
from src.core.settings import DEFAULT_SETTINGS, SolverSettings
from src.modes.functions import PiecewiseSinhFn, SinhPiece, SinhTerm, constant_piece
from src.modes.quadrature import composite_nodes
from src.spectrum.charfn import characteristic_scale, eval_S, scaled_interval

logger = logging.getLogger(__name__)

SampledFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class GreenKernel:
    """Shooting solutions u₁, u₂ and the characteristic value s_value = u₁(π)."""

    lam: complex
    u1: PiecewiseSinhFn
    u2: PiecewiseSinhFn
    s_value: complex
    alpha: complex

    @property
    def breakpoint(self) -> float:
        return self.u1.breakpoint

    def __call__(self, x, y) -> np.ndarray:
        x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        lo, hi = np.minimum(x, y), np.maximum(x, y)
        return -self.u1(lo) * self.u2(hi) / self.s_value

    def dx(self, x, y) -> np.ndarray:
        """∂𝒢/∂x (one-sided at x = y, taken from the x < y branch)."""
        x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        below = -self.u1.derivative(x) * self.u2(y) / self.s_value
        above = -self.u1(y) * self.u2.derivative(x) / self.s_value
        return np.where(x <= y, below, above)


def _sinhc(lam: complex, t: float) -> complex:
    return complex(t) if lam == 0 else complex(np.sinh(lam * t) / lam)


def _mirror_solution(lam: complex, a: float, alpha: complex) -> PiecewiseSinhFn:
    """
    Solution with u₂(π) = 0, u₂′(π) = −1 continued through the damper.

    Right of a it is sinh(λ(π−x))/λ. Left of a the same function is
    extended from t = 0 and the correction K·sinh(λ(x−a))/λ, with
    K = −αλ·u₂(a), produces the slope jump u₂′(a+) − u₂′(a−) = αλ·u₂(a).
    """
    sinhc_a = _sinhc(lam, a)
    k = -alpha * lam * _sinhc(lam, math.pi - a)
    left = SinhPiece(
        "left",
        (
            SinhTerm(_sinhc(lam, math.pi) - k * sinhc_a, "cosh"),
            SinhTerm(-complex(np.cosh(lam * math.pi)) + k * complex(np.cosh(lam * a)), "sinhc"),
        ),
    )
    return PiecewiseSinhFn(lam, a, left, constant_piece("right", 1.0, "sinhc"))


def green_kernel(
    lam: complex, params: DampingParams, settings: SolverSettings = DEFAULT_SETTINGS
) -> GreenKernel:
    """
    Green kernel at λ.

    Raises:
        PoleError: λ lies on the spectrum (|S(λ)| below tolerance).
    """
    lam = complex(lam)
    a, alpha = params.a, params.alpha
    scaled = scaled_interval(lam, a, alpha, settings)
    if abs(scaled.s[()]) * max(abs(lam), 1.0) <= settings.pole_tol * characteristic_scale(alpha):
        raise PoleError(f"λ={lam} is an eigenvalue; the resolvent has a pole there")
    s_value = eval_S(lam, params, settings)

    c = complex(np.cosh(lam * math.pi) + alpha * np.sinh(lam * a) * np.cosh(lam * (math.pi - a)))
    u1 = PiecewiseSinhFn(
        lam,
        a,
        constant_piece("left", 1.0, "sinhc"),
        SinhPiece("right", (SinhTerm(-c, "sinhc"), SinhTerm(s_value, "cosh"))),
    )
    u2 = _mirror_solution(lam, a, alpha)
    return GreenKernel(lam=lam, u1=u1, u2=u2, s_value=s_value, alpha=alpha)


def green_zero(x, y) -> np.ndarray:
    """𝒢₀(x, y) = −min(x,y)·(π − max(x,y))/π."""
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    return -np.minimum(x, y) * (math.pi - np.maximum(x, y)) / math.pi


@dataclass(frozen=True)
class ResolventImage:
    """(u, v) = (A − λ)⁻¹-type image of (f, g), evaluated on demand."""

    kernel: GreenKernel
    f: SampledFn
    g: SampledFn
    order: int = DEFAULT_SETTINGS.quadrature_order

    def u(self, x) -> np.ndarray:
        """u(x) = ∫𝒢_λ(x,y)(λf(y) + g(y))dy + α𝒢_λ(x,a)f(a)."""
        k = self.kernel
        a = k.breakpoint
        fa = complex(np.asarray(self.f(np.array([a])))[0])
        rate = abs(k.lam) + 1.0
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.empty(xs.shape, dtype=complex)
        for i, xi in enumerate(xs):
            cuts = sorted({0.0, a, float(xi), math.pi})
            total = 0j
            for lo, hi in zip(cuts[:-1], cuts[1:]):
                ys, ws = composite_nodes(lo, hi, rate, self.order)
                if ys.size:
                    total += np.sum(ws * k(xi, ys) * (k.lam * self.f(ys) + self.g(ys)))
            out[i] = total + k.alpha * complex(k(xi, a)) * fa
        return out.reshape(np.shape(x))

    def v(self, x) -> np.ndarray:
        return self.kernel.lam * self.u(x) + self.f(np.asarray(x, dtype=float))


def apply_resolvent(
    lam: complex,
    params: DampingParams,
    f: SampledFn,
    g: SampledFn,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> ResolventImage:
    """
    Apply the resolvent block formula to callables f, g.

    Returns a ResolventImage whose u and v are evaluated by composite
    Gauss–Legendre quadrature split at a and at the evaluation point.
    """
    kernel = green_kernel(lam, params, settings)
    return ResolventImage(kernel, f, g, settings.quadrature_order)
