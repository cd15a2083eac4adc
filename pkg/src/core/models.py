"""
src/core/models.py — Pydantic data models for diracwave

Typed representations of the damping configuration, the characteristic
polynomial and its roots, eigenvalue records, spectral windows and the
trace report. Solvers produce them, the serializer consumes them.
"""

from __future__ import annotations

import cmath
import math
from enum import Enum
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


# ── Enums ──────────────────────────────────────────────────────────


class ModelKind(str, Enum):
    INTERVAL = "interval"
    STAR = "star"


class Regime(str, Enum):
    SUBCRITICAL = "subcritical"
    CRITICAL_PLUS = "critical_plus"
    CRITICAL_MINUS = "critical_minus"


class ModeKind(str, Enum):
    EIGEN = "eigen"
    GENERALIZED = "generalized"
    ADJOINT = "adjoint"


class DampingClass(str, Enum):
    DISSIPATIVE = "dissipative"  # Re α > 0
    ACCRETIVE = "accretive"  # Re α < 0
    SKEW_ADJOINT = "skew_adjoint"  # Re α = 0


class OutputFormat(str, Enum):
    JSON = "json"
    CSV = "csv"


def _finite_complex(value: complex, name: str) -> complex:
    value = complex(value)
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


# ── Damping configuration ──────────────────────────────────────────


class DampingParams(BaseModel):
    """
    Placement a ∈ (0, π) and complex damping α of the interval model.

    When ``rational`` is given, a is derived as pπ/q and any explicit a is
    only accepted if it matches that value.
    """

    model_config = ConfigDict(frozen=True)

    a: float
    alpha: complex = 0j
    rational: Optional[tuple[int, int]] = None

    @model_validator(mode="before")
    @classmethod
    def _derive_placement(cls, data):
        if isinstance(data, dict) and data.get("rational") is not None:
            p, q = data["rational"]
            if not (0 < p < q):
                raise ValueError(f"rational placement needs 0 < p < q, got {p}/{q}")
            derived = p * math.pi / q
            given = data.get("a")
            if given is not None and abs(float(given) - derived) > 1e-15 * math.pi:
                raise ValueError(f"a={given} disagrees with rational placement {p}/{q}")
            data = {**data, "a": derived}
        return data

    @field_validator("rational")
    @classmethod
    def _check_rational(cls, v: Optional[tuple[int, int]]) -> Optional[tuple[int, int]]:
        if v is None:
            return v
        p, q = v
        if not (0 < p < q):
            raise ValueError(f"rational placement needs 0 < p < q, got {p}/{q}")
        if math.gcd(p, q) != 1:
            raise ValueError(f"p and q must be coprime, got {p}/{q}")
        return v

    @field_validator("a")
    @classmethod
    def _check_a(cls, v: float) -> float:
        if not (math.isfinite(v) and 0.0 < v < math.pi):
            raise ValueError(f"placement a must lie in (0, π), got {v}")
        return v

    @field_validator("alpha")
    @classmethod
    def _check_alpha(cls, v: complex) -> complex:
        return _finite_complex(v, "alpha")

    # ── Constructors ──

    @classmethod
    def from_rational(cls, p: int, q: int, alpha: complex = 0j) -> DampingParams:
        return cls(rational=(p, q), alpha=alpha)

    @classmethod
    def from_placement(cls, a: float, alpha: complex = 0j) -> DampingParams:
        return cls(a=a, alpha=alpha)

    # ── Derived views ──

    @property
    def is_rational(self) -> bool:
        return self.rational is not None

    @property
    def p(self) -> Optional[int]:
        return self.rational[0] if self.rational else None

    @property
    def q(self) -> Optional[int]:
        return self.rational[1] if self.rational else None

    def with_alpha(self, alpha: complex) -> DampingParams:
        if self.rational:
            return DampingParams(rational=self.rational, alpha=alpha)
        return DampingParams(a=self.a, alpha=alpha)

    def adjoint(self) -> DampingParams:
        """Parameters of the operator whose negative is the adjoint: α → −conj(α)."""
        return self.with_alpha(-self.alpha.conjugate())

    def mirrored(self) -> DampingParams:
        """The placement π − a with the same damping."""
        if self.rational:
            p, q = self.rational
            return DampingParams(rational=(q - p, q), alpha=self.alpha)
        return DampingParams(a=math.pi - self.a, alpha=self.alpha)

    def label(self) -> str:
        where = f"{self.p}π/{self.q}" if self.rational else f"{self.a:.6g}"
        return f"a={where}, α={self.alpha:.6g}"


class StarConfig(BaseModel):
    """n-edge compact star graph with damping α at the central vertex."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=1)
    alpha: complex = 0j

    @field_validator("alpha")
    @classmethod
    def _check_alpha(cls, v: complex) -> complex:
        return _finite_complex(v, "alpha")


class PoissonParams(BaseModel):
    """Parameters (β, γ) of the two-sided series Σ 1/((n+γ)² + β²)."""

    model_config = ConfigDict(frozen=True)

    beta: float
    gamma: float = 0.0

    @field_validator("beta")
    @classmethod
    def _check_beta(cls, v: float) -> float:
        if not math.isfinite(v) or v == 0.0:
            raise ValueError(f"beta must be finite and nonzero, got {v}")
        return v


# ── Characteristic function values ─────────────────────────────────


class CharValue(BaseModel):
    """S, F = λS and the first two λ-derivatives of F at one point."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    lam: complex = Field(alias="lambda")
    s: complex
    f: complex
    f1: complex
    f2: complex


# ── Polynomial & roots ─────────────────────────────────────────────


class DampingPolynomial(BaseModel):
    """
    Characteristic polynomial with coefficients in ascending degree order.

    Interval model: P_α(z) = (2−α)z^q + αz^p + αz^{q−p} − (2+α).
    Star graph:     P_{n,α}(z) = (n−α)z² + 2αz − (n+α).
    """

    model_config = ConfigDict(frozen=True)

    coeffs: tuple[complex, ...]
    alpha: complex
    effective_degree: int = Field(ge=1)
    regime: Regime = Regime.SUBCRITICAL
    p: Optional[int] = None
    q: Optional[int] = None
    n_edges: Optional[int] = None

    @model_validator(mode="after")
    def _check_degree(self) -> DampingPolynomial:
        if len(self.coeffs) != self.effective_degree + 1:
            raise ValueError(
                f"{len(self.coeffs)} coefficients for degree {self.effective_degree}"
            )
        if self.coeffs[-1] == 0:
            raise ValueError("leading coefficient must be nonzero after trimming")
        return self

    @property
    def coefficient_scale(self) -> float:
        return max(abs(c) for c in self.coeffs)

    def evaluate(self, z):
        """Evaluate P at scalar or array z (Horner, descending order)."""
        return np.polyval(np.asarray(self.coeffs[::-1], dtype=complex), z)

    def derivative(self, z):
        desc = np.polyder(np.asarray(self.coeffs[::-1], dtype=complex))
        return np.polyval(desc, z)

    def evaluation_scale(self, z: complex) -> float:
        """Σ|c_k||z|^k, the scale against which |P(z)| is judged."""
        r = abs(z)
        return float(sum(abs(c) * r**k for k, c in enumerate(self.coeffs)))


class RootRecord(BaseModel):
    """A root ζ = |ζ|e^{iθ} of the characteristic polynomial, θ ∈ (−π, π]."""

    model_config = ConfigDict(frozen=True)

    zeta: complex
    modulus: float = Field(ge=0.0)
    theta: float
    multiplicity: int = Field(ge=1)

    @model_validator(mode="after")
    def _check_polar(self) -> RootRecord:
        if abs(abs(self.zeta) - self.modulus) > 1e-12 * max(1.0, self.modulus):
            raise ValueError("modulus does not match |zeta|")
        if not (-math.pi < self.theta <= math.pi):
            raise ValueError(f"theta {self.theta} outside (-π, π]")
        return self

    @classmethod
    def from_zeta(cls, zeta: complex, multiplicity: int = 1) -> RootRecord:
        zeta = complex(zeta)
        theta = cmath.phase(zeta) if zeta != 0 else 0.0
        # negative reals land on the principal branch θ = π
        if theta <= -math.pi or (zeta.real < 0 and abs(zeta.imag) <= 1e-14 * abs(zeta)):
            theta = math.pi
        return cls(zeta=zeta, modulus=abs(zeta), theta=theta, multiplicity=multiplicity)

    @property
    def is_trivial(self) -> bool:
        """ζ = 1 generates the purely imaginary family."""
        return abs(self.zeta - 1.0) < 1e-12

    @property
    def is_escaped(self) -> bool:
        """ζ = 0 corresponds to no finite eigenvalue."""
        return self.modulus == 0.0


# ── Eigenvalues ────────────────────────────────────────────────────


class EigenvalueRecord(BaseModel):
    """One eigenvalue with its family/branch bookkeeping and multiplicities."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    lam: complex = Field(alias="lambda")
    family: int = Field(ge=1)
    branch: int = 0
    alg_multiplicity: int = Field(default=1, ge=1)
    geo_multiplicity: int = Field(default=1, ge=1)
    residual: float = Field(default=0.0, ge=0.0)
    iterations: int = 0  # Newton iterations, 0 for closed-form records

    @field_validator("lam")
    @classmethod
    def _check_lam(cls, v: complex) -> complex:
        return _finite_complex(v, "lambda")

    @property
    def re(self) -> float:
        return self.lam.real

    @property
    def im(self) -> float:
        return self.lam.imag

    def with_multiplicity(self, alg: int) -> EigenvalueRecord:
        return self.model_copy(update={"alg_multiplicity": alg})


def gram_order_key(record: EigenvalueRecord) -> tuple[float, float, int, float]:
    """Sort key: |Im λ|, then Re λ, then family, then sign of Im λ."""
    return (abs(record.im), record.re, record.family, record.im)


def spectrum_order_key(record: EigenvalueRecord) -> tuple[float, float]:
    return (record.im, record.re)


# ── Windows ────────────────────────────────────────────────────────


class SpectralWindow(BaseModel):
    """Closed rectangle [re_min, re_max] × [im_min, im_max] in the λ-plane."""

    model_config = ConfigDict(frozen=True)

    re_min: float
    re_max: float
    im_min: float
    im_max: float

    @model_validator(mode="after")
    def _check_bounds(self) -> SpectralWindow:
        values = (self.re_min, self.re_max, self.im_min, self.im_max)
        if not all(math.isfinite(v) for v in values):
            raise ValueError("window bounds must be finite")
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ValueError(f"degenerate window {values}")
        return self

    @classmethod
    def symmetric(cls, im_max: float, re_max: float) -> SpectralWindow:
        return cls(re_min=-re_max, re_max=re_max, im_min=-im_max, im_max=im_max)

    @classmethod
    def default_for(cls, alpha: complex, im_max: float, re_floor: float = 0.0) -> SpectralWindow:
        """Symmetric window whose real half-width is c₁ = max(4, 2|α|, re_floor)."""
        return cls.symmetric(im_max, max(4.0, 2.0 * abs(alpha), re_floor))

    @property
    def width(self) -> float:
        return self.re_max - self.re_min

    @property
    def height(self) -> float:
        return self.im_max - self.im_min

    @property
    def center(self) -> complex:
        return complex(0.5 * (self.re_min + self.re_max), 0.5 * (self.im_min + self.im_max))

    @property
    def diameter(self) -> float:
        return math.hypot(self.width, self.height)

    def corners(self) -> tuple[complex, complex, complex, complex]:
        """Counter-clockwise from the lower-left corner."""
        return (
            complex(self.re_min, self.im_min),
            complex(self.re_max, self.im_min),
            complex(self.re_max, self.im_max),
            complex(self.re_min, self.im_max),
        )

    def contains(self, z: complex, pad: float = 0.0) -> bool:
        return (
            self.re_min - pad <= z.real <= self.re_max + pad
            and self.im_min - pad <= z.imag <= self.im_max + pad
        )

    def split(self, fraction: float = 0.5) -> tuple[SpectralWindow, SpectralWindow]:
        """Cut across the longest side at the given fraction."""
        if self.width >= self.height:
            cut = self.re_min + fraction * self.width
            return (
                self.model_copy(update={"re_max": cut}),
                self.model_copy(update={"re_min": cut}),
            )
        cut = self.im_min + fraction * self.height
        return (
            self.model_copy(update={"im_max": cut}),
            self.model_copy(update={"im_min": cut}),
        )

    def dilated(self, factor: float) -> SpectralWindow:
        c = self.center
        hw, hh = 0.5 * self.width * factor, 0.5 * self.height * factor
        return SpectralWindow(
            re_min=c.real - hw, re_max=c.real + hw, im_min=c.imag - hh, im_max=c.imag + hh
        )

    def widened(self, factor: float) -> SpectralWindow:
        """Scale the real extent only, keeping the imaginary range."""
        return self.model_copy(
            update={"re_min": self.re_min * factor, "re_max": self.re_max * factor}
        )

    def scaled(self, factor: float) -> SpectralWindow:
        """Image of the window under λ ↦ factor·λ (factor > 0)."""
        return SpectralWindow(
            re_min=self.re_min * factor,
            re_max=self.re_max * factor,
            im_min=self.im_min * factor,
            im_max=self.im_max * factor,
        )


# ── Modes ──────────────────────────────────────────────────────────


class BasisMode(BaseModel):
    """Undamped mode ω_n(x) = (1/(n√π))·sin(nx)·(1, in)."""

    model_config = ConfigDict(frozen=True)

    index: int

    @field_validator("index")
    @classmethod
    def _check_index(cls, v: int) -> int:
        if v == 0:
            raise ValueError("basis mode index must be nonzero")
        return v

    @property
    def amplitude(self) -> float:
        return 1.0 / (self.index * math.sqrt(math.pi))

    @property
    def lam(self) -> complex:
        return complex(0.0, self.index)


class GraphMode(BaseModel):
    """
    Eigenvector on the star graph: edge j carries w_j·sinh(λ(π−x)), paired with λ times it.

    The common-profile mode has all weights 1; balanced modes (Σw_j = 0)
    belong to the purely imaginary family.
    """

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    lam: complex = Field(alias="lambda")
    n: int = Field(ge=1)
    alpha: complex
    edge_weights: tuple[complex, ...]
    family: int = Field(ge=1)

    @model_validator(mode="after")
    def _check_weights(self) -> GraphMode:
        if len(self.edge_weights) != self.n:
            raise ValueError(f"{len(self.edge_weights)} edge weights for n={self.n}")
        return self

    def profile(self, x):
        return np.sinh(self.lam * (math.pi - np.asarray(x, dtype=float)))

    def profile_derivative(self, x):
        return -self.lam * np.cosh(self.lam * (math.pi - np.asarray(x, dtype=float)))

    def edge_values(self, x) -> np.ndarray:
        """Array of shape (n, len(x)) with the first component on every edge."""
        w = np.asarray(self.edge_weights, dtype=complex)[:, None]
        return w * np.atleast_1d(self.profile(x))[None, :]

    def outer_values(self) -> np.ndarray:
        """Values at the Dirichlet ends x = π (exactly zero)."""
        return np.asarray(self.edge_weights, dtype=complex) * self.profile(math.pi)

    def vertex_residual(self) -> float:
        """Relative residual of Σ_j u_j′(0) = αλu(0) together with continuity at the vertex."""
        w = np.asarray(self.edge_weights, dtype=complex)
        values = w * self.profile(0.0)
        flux = np.sum(w) * self.profile_derivative(0.0)
        u0 = values[0]
        size = max(abs(np.sinh(self.lam * math.pi)), abs(np.cosh(self.lam * math.pi)), 1.0)
        scale = max(abs(self.lam) * size, 1e-300) * float(np.max(np.abs(w)))
        damping = abs(flux - self.alpha * self.lam * u0) / scale
        continuity = float(np.max(np.abs(values - u0))) / scale
        return max(damping, continuity)


# ── Reports ────────────────────────────────────────────────────────


class HSNormReport(BaseModel):
    """Hilbert–Schmidt norm of A⁻¹: closed bound, truncated mode sum, a-free bound."""

    closed_bound: float
    truncated_sum: float
    a_independent_bound: float
    truncation: int


class CoverageReport(BaseModel):
    """Squared distances of undamped modes ω_j (|j| ≤ N) to the span of computed root vectors."""

    truncation: int
    deficit_fraction: float  # share of ω_j with squared distance > 1/4
    max_distance: float
    distances: list[float] = Field(default_factory=list)


class TraceReport(BaseModel):
    """Both sides of the trace comparison and the resulting Riesz-basis verdict."""

    model: ModelKind = ModelKind.INTERVAL
    trace_re_inverse: float
    spectral_sum_closed: Optional[float] = None
    spectral_sum_truncated: float
    tail_bound: float
    gap: Optional[float] = None
    critical_correction: Optional[float] = None
    regime: Regime
    riesz_verdict: bool
    r: Optional[int] = None
    truncation: int
    damping_class: DampingClass
    rule_based: bool = False
    c1: float = 0.0
    c2: float = 0.0
    f2_from_roots: Optional[complex] = None
    f2_direct: Optional[complex] = None
    truncated_consistent: bool = True
    livsic_direction_ok: bool = True
    notes: list[str] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check_verdict(self) -> TraceReport:
        if self.riesz_verdict != (self.regime == Regime.SUBCRITICAL):
            raise ValueError("riesz_verdict must equal (regime == subcritical)")
        return self

    @property
    def consistent(self) -> bool:
        return self.truncated_consistent and self.livsic_direction_ok
