"""
src/modes/functions.py — Piecewise hyperbolic functions on [0, π]

A mode's first component is given on [0, a] and [a, π] by finite sums

    Σ coef · t^m · f(λt),   f ∈ {sinh, cosh, sinhc},   m ∈ {0, 1},

where each piece is anchored at its own endpoint: t = x on the left
(anchor 0) and t = π − x on the right (anchor π). sinhc(λt) stands for
sinh(λt)/λ, which tends to t as λ → 0. All derivatives are analytic;
d/dx = ±d/dt depending on the anchor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from src.core.models import ModeKind

Kind = Literal["sinh", "cosh", "sinhc"]
Anchor = Literal["left", "right"]
Side = Literal["left", "right"]


@dataclass(frozen=True)
class SinhTerm:
    coef: complex
    kind: Kind
    weighted: bool = False  # multiply by the piece variable t


def _basis(kind: Kind, lam: complex, t: np.ndarray, order: int) -> np.ndarray:
    """order-th t-derivative of f(λt)."""
    z = lam * t
    if kind == "sinh":
        base = np.sinh(z) if order % 2 == 0 else np.cosh(z)
        return lam**order * base
    if kind == "cosh":
        base = np.cosh(z) if order % 2 == 0 else np.sinh(z)
        return lam**order * base
    # sinhc(λt) = sinh(λt)/λ
    if order == 0:
        small = np.abs(z) < 1e-3
        safe = np.where(lam == 0, 1.0, lam)
        series = t * (1.0 + z * z / 6.0 + z**4 / 120.0)
        return np.where(small, series, np.sinh(z) / safe)
    base = np.cosh(z) if order % 2 == 1 else np.sinh(z)
    return lam ** (order - 1) * base


@dataclass(frozen=True)
class SinhPiece:
    """One piece of a PiecewiseSinhFn."""

    anchor: Anchor
    terms: tuple[SinhTerm, ...] = ()

    def _t(self, x: np.ndarray) -> np.ndarray:
        return x if self.anchor == "left" else math.pi - x

    def evaluate(self, x, lam: complex, order: int = 0) -> np.ndarray:
        """order-th x-derivative (0, 1 or 2) at x."""
        x = np.asarray(x, dtype=float)
        t = self._t(x)
        sign = 1.0 if self.anchor == "left" else -1.0
        total = np.zeros(np.shape(x), dtype=complex)
        for term in self.terms:
            if not term.weighted:
                val = _basis(term.kind, lam, t, order)
            elif order == 0:
                val = t * _basis(term.kind, lam, t, 0)
            elif order == 1:
                val = _basis(term.kind, lam, t, 0) + t * _basis(term.kind, lam, t, 1)
            else:
                val = 2.0 * _basis(term.kind, lam, t, 1) + t * _basis(term.kind, lam, t, 2)
            total = total + term.coef * val
        return total * sign**order

    def scaled(self, factor: complex) -> SinhPiece:
        return SinhPiece(
            self.anchor, tuple(SinhTerm(t.coef * factor, t.kind, t.weighted) for t in self.terms)
        )

    def plus(self, other: SinhPiece) -> SinhPiece:
        if other.anchor != self.anchor:
            raise ValueError("cannot add pieces with different anchors")
        return SinhPiece(self.anchor, self.terms + other.terms)


@dataclass(frozen=True)
class PiecewiseSinhFn:
    """Function on [0, π] with a breakpoint at a and hyperbolic pieces on each side."""

    lam: complex
    breakpoint: float
    left: SinhPiece
    right: SinhPiece

    def piece(self, side: Side) -> SinhPiece:
        return self.left if side == "left" else self.right

    def on(self, side: Side, x, order: int = 0) -> np.ndarray:
        """Evaluate one piece (possibly beyond its own interval)."""
        return self.piece(side).evaluate(x, self.lam, order)

    def __call__(self, x, order: int = 0) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.where(x <= self.breakpoint, self.on("left", x, order), self.on("right", x, order))

    def derivative(self, x) -> np.ndarray:
        return self(x, order=1)

    def second_derivative(self, x) -> np.ndarray:
        return self(x, order=2)

    def scaled(self, factor: complex) -> PiecewiseSinhFn:
        return PiecewiseSinhFn(
            self.lam, self.breakpoint, self.left.scaled(factor), self.right.scaled(factor)
        )

    def plus(self, other: PiecewiseSinhFn) -> PiecewiseSinhFn:
        if other.breakpoint != self.breakpoint:
            raise ValueError("breakpoints differ")
        return PiecewiseSinhFn(
            self.lam, self.breakpoint, self.left.plus(other.left), self.right.plus(other.right)
        )

    # ── Interface conditions ──

    def value_at_break(self) -> tuple[complex, complex]:
        a = self.breakpoint
        return complex(self.on("left", a)), complex(self.on("right", a))

    def slope_jump(self) -> complex:
        """u′(a+) − u′(a−)."""
        a = self.breakpoint
        return complex(self.on("right", a, 1) - self.on("left", a, 1))

    def continuity_gap(self) -> complex:
        left, right = self.value_at_break()
        return left - right

    def endpoint_values(self) -> tuple[complex, complex]:
        return complex(self.on("left", 0.0)), complex(self.on("right", math.pi))


@dataclass(frozen=True)
class ModePair:
    """State (u, v) of the first-order system; eigen kind has v = λu."""

    first: PiecewiseSinhFn
    second: PiecewiseSinhFn
    lam: complex
    kind: ModeKind = ModeKind.EIGEN
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def breakpoint(self) -> float:
        return self.first.breakpoint

    def scaled(self, factor: complex) -> ModePair:
        return ModePair(
            self.first.scaled(factor), self.second.scaled(factor), self.lam, self.kind, self.meta
        )


def constant_piece(anchor: Anchor, coef: complex, kind: Kind, weighted: bool = False) -> SinhPiece:
    return SinhPiece(anchor, (SinhTerm(complex(coef), kind, weighted),))


def eigen_pair(first: PiecewiseSinhFn, kind: ModeKind = ModeKind.EIGEN) -> ModePair:
    """(u, λu)."""
    return ModePair(first, first.scaled(first.lam), first.lam, kind)
