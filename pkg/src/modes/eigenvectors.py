"""
src/modes/eigenvectors.py — Eigenvectors, generalized eigenvectors, adjoint partners

Eigenfunction at an eigenvalue λ:
    u = sinh(λ(π−a))·sinh(λx)     on [0, a]
    u = sinh(λa)·sinh(λ(π−x))     on [a, π]
paired with λu. On the purely imaginary family both prefactors vanish,
and u = sinh(λx) on the whole interval is used instead.

At a double eigenvalue the generalized eigenvector ψ̃ = (ũ, u + λũ)
solves (A − λ)ψ̃ = ψ: ũ″ − λ²ũ = 2λu on each side, ũ continuous, and
ũ′(a+) − ũ′(a−) = α(u(a) + λũ(a)).
"""

from __future__ import annotations

import logging
import math

import numpy as np
import scipy.linalg

from src.core.errors import ConvergenceError, NotAnEigenvalueError
from src.core.models import DampingParams, ModeKind
from src.core.settings import DEFAULT_SETTINGS, SolverSettings
from src.modes.functions import (
    ModePair,
    PiecewiseSinhFn,
    SinhPiece,
    SinhTerm,
    constant_piece,
    eigen_pair,
)
from src.spectrum.charfn import characteristic_scale, scaled_interval

logger = logging.getLogger(__name__)

_EMPTY_LEFT = SinhPiece("left")
_EMPTY_RIGHT = SinhPiece("right")


def _require_eigenvalue(lam: complex, params: DampingParams, settings: SolverSettings) -> None:
    v = scaled_interval(lam, params.a, params.alpha, settings)
    scale = characteristic_scale(params.alpha)
    if abs(v.f[()]) > settings.eigen_tol * scale:
        raise NotAnEigenvalueError(
            f"λ={lam} is not an eigenvalue ({params.label()}): scaled |F|={abs(v.f[()]):.3e}"
        )


def _profile_coefficients(lam: complex, a: float) -> tuple[complex, complex]:
    """
    Coefficients (c_L, c_R) with u = c_L·sinh(λx) on the left and
    c_R·sinh(λ(π−x)) on the right.
    """
    s_left = complex(np.sinh(lam * a))
    s_right = complex(np.sinh(lam * (math.pi - a)))
    ref = max(abs(np.cosh(lam * a)), abs(np.cosh(lam * (math.pi - a))), 1.0)
    if abs(s_left) <= 1e-9 * ref and abs(s_right) <= 1e-9 * ref:
        # sinh(λx) = −cosh(λπ)·sinh(λ(π−x)) when sinh(λπ) = 0
        return 1.0 + 0j, -complex(np.cosh(lam * math.pi))
    return s_right, s_left


def jump_residual(pair: ModePair, alpha: complex) -> float:
    """Relative residual of u′(a+) − u′(a−) = α·v(a)."""
    u, v = pair.first, pair.second
    a = u.breakpoint
    jump = u.slope_jump()
    va = complex(v.on("left", a))
    # u′(a±) can vanish at a node of the mode, so the size of the mode sets the scale
    profile = float(np.max(np.abs(u(np.linspace(0.0, math.pi, 65)))))
    scale = max(
        abs(complex(u.on("left", a, 1))),
        abs(complex(u.on("right", a, 1))),
        abs(alpha * va),
        max(abs(u.lam), 1.0) * profile,
        1e-300,
    )
    return abs(jump - alpha * va) / scale


def eigenfunction(
    lam: complex, params: DampingParams, settings: SolverSettings = DEFAULT_SETTINGS
) -> ModePair:
    """
    Eigenvector (u, λu) at the eigenvalue λ.

    Raises:
        NotAnEigenvalueError: |S(λ)| is not small, or the jump condition fails.
    """
    lam = complex(lam)
    _require_eigenvalue(lam, params, settings)
    c_left, c_right = _profile_coefficients(lam, params.a)
    first = PiecewiseSinhFn(
        lam,
        params.a,
        constant_piece("left", c_left, "sinh"),
        constant_piece("right", c_right, "sinh"),
    )
    pair = eigen_pair(first)
    residual = jump_residual(pair, params.alpha)
    if residual > settings.jump_tol:
        raise NotAnEigenvalueError(f"jump condition fails at λ={lam}: residual {residual:.3e}")
    return pair


def generalized_eigenfunction(
    lam: complex, params: DampingParams, settings: SolverSettings = DEFAULT_SETTINGS
) -> ModePair:
    """
    Generalized eigenvector (ũ, u + λũ) at an algebraically double eigenvalue.

    ũ = particular + c₁·sinh(λx) [left] + c₂·sinh(λ(π−x)) [right], with
    particular pieces c_L·x·cosh(λx) and c_R·(π−x)·cosh(λ(π−x)). The
    coefficients come from continuity and the inhomogeneous jump
    condition; that 2×2 system is singular at an eigenvalue, so its
    minimum-norm least-squares solution is taken and checked for
    consistency.

    Raises:
        NotAnEigenvalueError: λ is not a double eigenvalue.
    """
    lam = complex(lam)
    alpha = params.alpha
    a = params.a
    v = scaled_interval(lam, a, alpha, settings)
    scale = characteristic_scale(alpha)
    if abs(v.f[()]) > settings.double_tol * scale or abs(v.f1[()]) > settings.double_tol * scale:
        raise NotAnEigenvalueError(f"λ={lam} is not a double eigenvalue ({params.label()})")

    parent = eigenfunction(lam, params, settings)
    u = parent.first
    c_left, c_right = _profile_coefficients(lam, a)

    particular = PiecewiseSinhFn(
        lam,
        a,
        constant_piece("left", c_left, "cosh", weighted=True),
        constant_piece("right", c_right, "cosh", weighted=True),
    )
    h_left = PiecewiseSinhFn(lam, a, constant_piece("left", 1.0, "sinh"), _EMPTY_RIGHT)
    h_right = PiecewiseSinhFn(lam, a, _EMPTY_LEFT, constant_piece("right", 1.0, "sinh"))

    def conditions(g: PiecewiseSinhFn) -> np.ndarray:
        return np.array(
            [g.continuity_gap(), g.slope_jump() - alpha * lam * complex(g.on("left", a))]
        )

    u_a = complex(u.on("left", a))
    matrix = np.column_stack([conditions(h_left), conditions(h_right)])
    rhs = -(conditions(particular) - np.array([0.0, alpha * u_a]))
    coeffs, *_ = scipy.linalg.lstsq(matrix, rhs, cond=1e-9)

    mismatch = np.linalg.norm(matrix @ coeffs - rhs)
    ref = max(np.linalg.norm(rhs), np.linalg.norm(matrix) * np.linalg.norm(coeffs), 1e-300)
    if mismatch > settings.generalized_tol * ref:
        raise NotAnEigenvalueError(
            f"generalized eigenvector equations inconsistent at λ={lam} "
            f"(relative mismatch {mismatch / ref:.3e}); eigenvalue is simple"
        )

    u_tilde = PiecewiseSinhFn(
        lam,
        a,
        particular.left.plus(constant_piece("left", coeffs[0], "sinh")),
        particular.right.plus(constant_piece("right", coeffs[1], "sinh")),
    )
    residual = ode_residual_generalized(u_tilde, u)
    if residual > settings.generalized_tol:
        raise ConvergenceError(f"generalized eigenvector ODE residual {residual:.3e} at λ={lam}")
    logger.debug("Generalized eigenvector at λ=%s: c=%s", lam, coeffs)

    second = u.plus(u_tilde.scaled(lam))
    return ModePair(u_tilde, second, lam, ModeKind.GENERALIZED, {"parent": parent})


def ode_residual_generalized(u_tilde: PiecewiseSinhFn, u: PiecewiseSinhFn, samples: int = 16) -> float:
    """max |ũ″ − λ²ũ − 2λu| relative to |2λu| on interior points of both pieces."""
    lam = u.lam
    a = u.breakpoint
    worst = 0.0
    for side, lo, hi in (("left", 0.0, a), ("right", a, math.pi)):
        x = np.linspace(lo, hi, samples + 2)[1:-1]
        lhs = u_tilde.on(side, x, 2) - lam**2 * u_tilde.on(side, x)
        rhs = 2.0 * lam * u.on(side, x)
        ref = max(float(np.max(np.abs(rhs))), float(np.max(np.abs(lam**2 * u_tilde.on(side, x)))), 1e-300)
        worst = max(worst, float(np.max(np.abs(lhs - rhs))) / ref)
    return worst


def adjoint_eigenfunction(
    lam: complex, params: DampingParams, settings: SolverSettings = DEFAULT_SETTINGS
) -> ModePair:
    """
    Eigenvector of A*(a, α) at conj(λ).

    A*(a, α) = −A(a, −conj α), so this is the eigenfunction of
    A(a, −conj α) at −conj(λ); the returned pair carries lam = conj(λ).
    """
    lam = complex(lam)
    mirrored = eigenfunction(-lam.conjugate(), params.adjoint(), settings)
    return ModePair(mirrored.first, mirrored.second, lam.conjugate(), ModeKind.ADJOINT)
