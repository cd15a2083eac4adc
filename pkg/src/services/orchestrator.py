"""
src/services/orchestrator.py — Run orchestration

Coordinates one command of a run:
  RunConfig → parameters/window/settings → solver → RunResult → serializer

Commands: spectrum | verify | basis | graph-spectrum | green.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

import numpy as np
from pydantic import ValidationError

from src.core.errors import DomainError, IdentityViolation
from src.core.models import (
    DampingParams,
    EigenvalueRecord,
    ModelKind,
    OutputFormat,
    SpectralWindow,
    StarConfig,
    TraceReport,
    spectrum_order_key,
)
from src.core.settings import DEFAULT_SETTINGS, SolverSettings
from src.graph.stargraph import graph_gram_condition, graph_spectrum
from src.modes.basis import (
    biorthogonal_system,
    coverage_deficit,
    gram_ladder,
    hs_norm,
    ladder_window,
)
from src.modes.green import green_kernel
from src.spectrum.contour import asymptotic_spacing
from src.spectrum.solver import compute_spectrum
from src.trace.report import livsic_report, livsic_report_graph

logger = logging.getLogger(__name__)

COMMANDS = ("spectrum", "verify", "basis", "graph-spectrum", "green")


@dataclass
class RunConfig:
    """Configuration for one command."""

    # Model
    model: ModelKind = ModelKind.INTERVAL
    pq: Optional[tuple[int, int]] = None  # rational placement a = pπ/q
    a: Optional[float] = None  # real placement
    n: Optional[int] = None  # star-graph edge count
    alpha: complex = 0j

    # Window
    im_max: float = 20.0
    re_max: Optional[float] = None  # None → cover every family

    # Identities / basis diagnostics
    truncation: int = 64
    ladder: tuple[int, ...] = (8, 16, 32, 64)
    coverage_size: int = 16
    biorthogonal_count: int = 10

    # Green kernel
    lam: Optional[complex] = None
    grid: int = 9

    # Output
    output_format: OutputFormat = OutputFormat.JSON
    output_path: Optional[Path] = None

    # Numerics
    tol: Optional[float] = None  # overrides the absolute verdict tolerance
    verbose: bool = False

    def validate(self) -> None:
        """
        Check that model and placement are mutually consistent.

        Raises:
            DomainError: inconsistent or missing placement, N < 1, bad window.
        """
        if self.truncation < 1:
            raise DomainError(f"truncation must be ≥ 1, got {self.truncation}")
        if not (self.im_max > 0 and math.isfinite(self.im_max)):
            raise DomainError(f"--im-max must be positive, got {self.im_max}")
        if self.re_max is not None and not self.re_max > 0:
            raise DomainError(f"--re-max must be positive, got {self.re_max}")
        if self.tol is not None and not self.tol > 0:
            raise DomainError(f"--tol must be positive, got {self.tol}")
        if self.model == ModelKind.STAR:
            if self.n is None:
                raise DomainError("the star model needs --n")
            if self.pq is not None or self.a is not None:
                raise DomainError("the star model takes --n, not --pq/--a")
            if self.n < 1:
                raise DomainError(f"edge count must be ≥ 1, got {self.n}")
        else:
            if self.n is not None:
                raise DomainError("the interval model takes --pq or --a, not --n")
            if (self.pq is None) == (self.a is None):
                raise DomainError("the interval model needs exactly one of --pq and --a")

    def params(self) -> DampingParams:
        try:
            if self.pq is not None:
                return DampingParams.from_rational(*self.pq, alpha=self.alpha)
            return DampingParams.from_placement(self.a, alpha=self.alpha)
        except ValidationError as exc:
            raise DomainError(str(exc.errors()[0]["msg"])) from exc

    def star(self) -> StarConfig:
        try:
            return StarConfig(n=self.n, alpha=self.alpha)
        except ValidationError as exc:
            raise DomainError(str(exc.errors()[0]["msg"])) from exc

    def window(self) -> Optional[SpectralWindow]:
        """Explicit window when --re-max is given; otherwise the solver picks the real extent."""
        if self.re_max is None:
            return None
        return SpectralWindow.symmetric(self.im_max, self.re_max)

    def settings(self) -> SolverSettings:
        if self.tol is None:
            return DEFAULT_SETTINGS
        return DEFAULT_SETTINGS.with_overrides(verdict_abs_tol=self.tol)

    def as_dict(self) -> dict[str, Any]:
        """Echo of the configuration for reports (fixed key order)."""
        return {
            "model": self.model.value,
            "pq": list(self.pq) if self.pq else None,
            "a": self.params().a if self.model == ModelKind.INTERVAL else None,
            "n": self.n,
            "alpha": self.alpha,
            "im_max": self.im_max,
            "re_max": self.re_max,
            "truncation": self.truncation,
            "tol": self.tol,
        }


@dataclass
class RunResult:
    """Result of one command."""

    command: str
    config: dict[str, Any]

    # Spectrum
    eigenvalues: list[EigenvalueRecord] = field(default_factory=list)

    # Identities
    trace_report: Optional[TraceReport] = None

    # Green kernel samples: (x, y, 𝒢_λ(x, y))
    green: list[tuple[float, float, complex]] = field(default_factory=list)

    # Everything else (method, regime, Gram ladder, coverage, …)
    diagnostics: dict[str, Any] = field(default_factory=dict)


class SpectralOrchestrator:
    """
    Runs one command against a validated RunConfig.

    Usage:
        orch = SpectralOrchestrator(RunConfig(pq=(1, 3), alpha=1))
        result = orch.run("verify")
        # result.trace_report.riesz_verdict → True
    """

    def __init__(self, config: RunConfig):
        config.validate()
        self.config = config
        self.settings = config.settings()

    def run(self, command: str) -> RunResult:
        if command not in COMMANDS:
            raise DomainError(f"unknown command {command!r}; expected one of {', '.join(COMMANDS)}")
        if command == "graph-spectrum":
            if self.config.model != ModelKind.STAR:
                raise DomainError("graph-spectrum needs --model star")
            command = "spectrum"
        handler = getattr(self, command)
        return handler()

    # ── 1. Spectrum ────────────────────────────────────────────────

    def spectrum(self) -> RunResult:
        """Eigenvalue table sorted by Im λ."""
        cfg = self.config
        if cfg.model == ModelKind.STAR:
            result = graph_spectrum(cfg.star(), cfg.window(), cfg.im_max, self.settings)
            diagnostics: dict[str, Any] = {}
        else:
            params = cfg.params()
            result = compute_spectrum(params, cfg.window(), cfg.im_max, self.settings)
            diagnostics = {"asymptotic_spacing": asymptotic_spacing(params, self.settings)}

        records = sorted(result.eigenvalues, key=spectrum_order_key)
        diagnostics.update(
            {
                "method": result.method,
                "regime": result.regime.value,
                "window": result.window.model_dump(),
                "count": len(records),
                "total_multiplicity": result.total_multiplicity,
                "roots": [r.zeta for r in result.roots],
                "escaped_roots": sum(r.multiplicity for r in result.escaped),
            }
        )
        logger.info("spectrum: %d eigenvalues (%s)", len(records), result.method)
        return RunResult("spectrum", cfg.as_dict(), eigenvalues=records, diagnostics=diagnostics)

    # ── 2. Verify ──────────────────────────────────────────────────

    def verify(self) -> RunResult:
        """
        Trace report; internal inconsistencies raise IdentityViolation.

        A false Riesz verdict is a valid result, not a failure.
        """
        cfg = self.config
        if cfg.model == ModelKind.STAR:
            report = livsic_report_graph(cfg.n, cfg.alpha, cfg.truncation, self.settings)
        else:
            report = livsic_report(cfg.params(), cfg.truncation, self.settings)
        if not report.consistent:
            raise IdentityViolation("; ".join(report.notes) or "trace report is inconsistent")
        return RunResult(
            "verify",
            cfg.as_dict(),
            trace_report=report,
            diagnostics={"verdict_tolerance": self.settings.verdict_tolerance(report.trace_re_inverse)},
        )

    # ── 3. Basis diagnostics ───────────────────────────────────────

    def basis(self) -> RunResult:
        """Gram ladder, coverage deficit, biorthogonality residual and HS norm."""
        cfg = self.config
        if cfg.model == ModelKind.STAR:
            star = cfg.star()
            ladder = {
                size: graph_gram_condition(
                    star, SpectralWindow.symmetric(size + 0.5, cfg.re_max or 4.0), self.settings
                )
                for size in cfg.ladder
            }
            return RunResult("basis", cfg.as_dict(), diagnostics={"gram_condition": ladder})

        params = cfg.params()
        ladder = gram_ladder(params, cfg.ladder, cfg.re_max, self.settings)
        coverage = coverage_deficit(params, cfg.coverage_size, cfg.re_max, self.settings)

        window = ladder_window(params, cfg.coverage_size, cfg.re_max)
        records = compute_spectrum(params, window, settings=self.settings).eigenvalues
        system = biorthogonal_system(records, params, cfg.biorthogonal_count, self.settings)
        hs = hs_norm(params, cfg.truncation)

        diagnostics = {
            "gram_condition": ladder,
            "coverage": coverage.model_dump(),
            "biorthogonality_residual": system.residual_norm(self.settings),
            "adjoint_scale_factors": system.scale_factors,
            "hs_norm": hs.model_dump(),
        }
        logger.info("basis: Gram ladder %s", ladder)
        return RunResult("basis", cfg.as_dict(), diagnostics=diagnostics)

    # ── 4. Green kernel ────────────────────────────────────────────

    def green(self) -> RunResult:
        """𝒢_λ on a grid × grid tensor grid of [0, π]²."""
        cfg = self.config
        if cfg.model == ModelKind.STAR:
            raise DomainError("the Green kernel is only available for the interval model")
        if cfg.lam is None:
            raise DomainError("green needs --lambda")
        if cfg.grid < 2:
            raise DomainError(f"--grid must be ≥ 2, got {cfg.grid}")
        kernel = green_kernel(cfg.lam, cfg.params(), self.settings)
        xs = np.linspace(0.0, math.pi, cfg.grid)
        gx, gy = np.meshgrid(xs, xs, indexing="ij")
        values = kernel(gx, gy)
        samples = [
            (float(x), float(y), complex(v))
            for x, y, v in zip(gx.ravel(), gy.ravel(), values.ravel())
        ]
        return RunResult(
            "green",
            cfg.as_dict(),
            green=samples,
            diagnostics={"lambda": complex(cfg.lam), "s_value": kernel.s_value},
        )
