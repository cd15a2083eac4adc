"""
tests/test_trace.py — Tests for the trace identities and the comparison reports

Run with: pytest tests/test_trace.py -v
"""

from __future__ import annotations

import math

import numpy as np
import pytest
from pydantic import ValidationError

from src.core.errors import DomainError
from src.core.models import (
    DampingClass,
    DampingParams,
    ModelKind,
    PoissonParams,
    Regime,
    RootRecord,
    SpectralWindow,
)
from src.spectrum.polynomial import build_polynomial, find_roots, nontrivial_roots
from src.spectrum.rational import roots_to_eigenvalues
from src.trace.identities import (
    classify_damping,
    critical_correction,
    f2_direct,
    poisson_sum,
    second_derivative_from_roots,
    spectral_sum_closed,
    spectral_sum_truncated,
    tail_bound,
    trace_re_inverse,
    trace_re_inverse_graph,
)
from src.trace.report import livsic_report, livsic_report_graph

PI = math.pi


def closed_sum(params: DampingParams) -> float:
    p, q = params.rational
    roots = find_roots(build_polynomial(p, q, params.alpha))
    return spectral_sum_closed(nontrivial_roots(roots), q)


def coprime_placements(max_q: int):
    for q in range(2, max_q + 1):
        for p in range(1, q):
            if math.gcd(p, q) == 1:
                yield p, q


def random_suite(count: int, seed: int) -> list[tuple[int, int, complex]]:
    """Seeded (p, q, α) triples with α kept 0.3 away from ±2."""
    rng = np.random.default_rng(seed)
    cases = []
    while len(cases) < count:
        q = int(rng.integers(2, 10))
        p = int(rng.integers(1, q))
        alpha = complex(rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0))
        if math.gcd(p, q) == 1 and min(abs(alpha - 2.0), abs(alpha + 2.0)) >= 0.3:
            cases.append((p, q, alpha))
    return cases


# ── Trace side ───────────────────────────────────────────────────────


class TestTraceReInverse:
    def test_skew_adjoint_damping_has_zero_trace(self):
        assert trace_re_inverse(DampingParams.from_rational(1, 3, 2.5j)) == 0.0

    def test_centre_critical_value(self):
        assert trace_re_inverse(DampingParams.from_rational(1, 2, 2.0)) == pytest.approx(-PI / 2)

    def test_symmetric_under_mirroring(self):
        params = DampingParams.from_placement(0.8, 1.3 - 0.2j)
        assert trace_re_inverse(params) == pytest.approx(trace_re_inverse(params.mirrored()))

    def test_graph_values(self):
        assert trace_re_inverse_graph(2, 2.0) == pytest.approx(-PI)
        assert trace_re_inverse_graph(5, 3j) == 0.0

    def test_two_edge_graph_is_twice_centre_interval(self):
        alpha = 1.7 - 0.4j
        interval = trace_re_inverse(DampingParams.from_rational(1, 2, alpha))
        assert trace_re_inverse_graph(2, alpha) == pytest.approx(2.0 * interval)

    def test_graph_rejects_empty_star(self):
        with pytest.raises(DomainError):
            trace_re_inverse_graph(0, 1.0)

    @pytest.mark.parametrize(
        "alpha,expected",
        [
            (1.0, DampingClass.DISSIPATIVE),
            (-0.5 + 2j, DampingClass.ACCRETIVE),
            (3j, DampingClass.SKEW_ADJOINT),
        ],
    )
    def test_classify_damping(self, alpha, expected):
        assert classify_damping(alpha) == expected


# ── Series ───────────────────────────────────────────────────────────


class TestPoissonSum:
    def test_integer_shift(self):
        value = poisson_sum(PoissonParams(beta=1.0, gamma=0.0))
        assert value == pytest.approx(PI / math.tanh(PI), rel=1e-13)
        assert value == pytest.approx(3.15334, abs=1e-5)

    def test_half_shift(self):
        value = poisson_sum(PoissonParams(beta=1.0, gamma=0.5))
        assert value == pytest.approx(PI * math.tanh(PI), rel=1e-13)
        assert value == pytest.approx(3.129881, abs=1e-6)

    def test_even_in_beta(self):
        assert poisson_sum(PoissonParams(beta=-0.3, gamma=0.2)) == pytest.approx(
            poisson_sum(PoissonParams(beta=0.3, gamma=0.2))
        )

    def test_matches_partial_sum(self):
        beta, gamma = 0.37, 0.21
        n = np.arange(-200_000, 200_001, dtype=float)
        partial = float(np.sum(1.0 / (beta**2 + (gamma + n) ** 2)))
        value = poisson_sum(PoissonParams(beta=beta, gamma=gamma))
        assert value == pytest.approx(partial, rel=1e-4)

    def test_large_beta_stays_finite(self):
        assert poisson_sum(PoissonParams(beta=500.0)) == pytest.approx(PI / 500.0)

    def test_zero_beta_rejected(self):
        with pytest.raises(ValidationError):
            PoissonParams(beta=0.0)


# ── Spectral side ────────────────────────────────────────────────────


class TestSpectralSum:
    def test_undamped_sum_vanishes(self):
        assert closed_sum(DampingParams.from_rational(2, 5, 0.0)) == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize(
        "p,q,alpha", [(1, 3, 1.0), (2, 5, 3.0 - 1.0j), (3, 7, -0.7 + 2.0j), (1, 2, 5.0)]
    )
    def test_subcritical_sum_equals_trace(self, p, q, alpha):
        params = DampingParams.from_rational(p, q, alpha)
        assert closed_sum(params) == pytest.approx(trace_re_inverse(params), abs=1e-10)

    def test_critical_centre_has_no_off_axis_family(self):
        assert closed_sum(DampingParams.from_rational(1, 2, 2.0)) == 0.0

    def test_rejects_trivial_and_escaped_roots(self):
        with pytest.raises(DomainError):
            spectral_sum_closed([RootRecord.from_zeta(1.0)], 3)
        with pytest.raises(DomainError):
            spectral_sum_closed([RootRecord.from_zeta(0.0)], 3)

    def test_truncated_sum_within_tail_bound(self):
        params = DampingParams.from_rational(1, 3, 1.0)
        roots = find_roots(build_polynomial(1, 3, 1.0))
        window = SpectralWindow.symmetric(3 * 501.0, 2.0)
        eigs = roots_to_eigenvalues(roots, 3, window)
        truncated = spectral_sum_truncated(eigs, 500, q=3, families=2)
        closed = closed_sum(params)
        assert truncated.families == 2
        assert 0.0 < truncated.tail_bound < 1e-2
        assert abs(truncated.value - closed) <= truncated.tail_bound

    def test_undamped_truncated_sum_is_zero(self):
        roots = find_roots(build_polynomial(1, 3, 0.0))
        eigs = roots_to_eigenvalues(roots, 3, SpectralWindow.symmetric(40.0, 1.0))
        truncated = spectral_sum_truncated(eigs, 10, q=3)
        assert truncated.value == pytest.approx(0.0, abs=1e-12)

    def test_incomplete_branches_rejected(self):
        roots = find_roots(build_polynomial(1, 3, 1.0))
        eigs = roots_to_eigenvalues(roots, 3, SpectralWindow.symmetric(10.0, 2.0))
        with pytest.raises(DomainError):
            spectral_sum_truncated(eigs, 20, q=3)

    def test_tail_bound_needs_positive_shift(self):
        with pytest.raises(DomainError):
            tail_bound(1.0, 10.0, 1, 2, 1)
        assert tail_bound(0.0, 1.0, 1, 5, 2) == 0.0


class TestRandomSuite:
    @pytest.mark.parametrize("p,q,alpha", random_suite(50, seed=2024))
    def test_closed_sum_equals_trace(self, p, q, alpha):
        params = DampingParams.from_rational(p, q, alpha)
        trace = trace_re_inverse(params)
        assert closed_sum(params) == pytest.approx(trace, abs=1e-8 * (1.0 + abs(trace)))

    @pytest.mark.parametrize("p,q,alpha", random_suite(50, seed=2024))
    def test_roots_reproduce_second_derivative(self, p, q, alpha):
        params = DampingParams.from_rational(p, q, alpha)
        roots = find_roots(build_polynomial(p, q, alpha))
        expected = f2_direct(params)
        assert abs(second_derivative_from_roots(roots, q) - expected) <= 1e-8 * (1.0 + abs(expected))


# ── Criticality ──────────────────────────────────────────────────────


class TestCriticalCorrection:
    @pytest.mark.parametrize(
        "p,q,sign,expected",
        [(1, 2, 1, PI / 2), (1, 3, 1, PI / 3), (2, 3, -1, -PI / 3)],
    )
    def test_known_values(self, p, q, sign, expected):
        assert critical_correction(p, q, sign) == pytest.approx(expected)

    def test_invalid_inputs(self):
        with pytest.raises(DomainError):
            critical_correction(2, 4, 1)
        with pytest.raises(DomainError):
            critical_correction(1, 3, 0)

    @pytest.mark.parametrize("p,q", list(coprime_placements(9)))
    @pytest.mark.parametrize("sign", [1, -1])
    def test_gap_equals_correction(self, p, q, sign):
        params = DampingParams.from_rational(p, q, 2.0 * sign)
        gap = closed_sum(params) - trace_re_inverse(params)
        assert gap == pytest.approx(critical_correction(p, q, sign), abs=1e-9)


class TestSecondDerivative:
    @pytest.mark.parametrize(
        "p,q,alpha",
        [(1, 3, 1.0 + 0.5j), (2, 5, -3.0), (1, 2, 0.4j), (1, 3, 2.0), (1, 3, -2.0), (3, 8, -2.0)],
    )
    def test_roots_reproduce_direct_value(self, p, q, alpha):
        params = DampingParams.from_rational(p, q, alpha)
        roots = find_roots(build_polynomial(p, q, alpha))
        expected = f2_direct(params)
        assert second_derivative_from_roots(roots, q) == pytest.approx(expected, abs=1e-9)


# ── Reports ──────────────────────────────────────────────────────────


class TestLivsicReport:
    def test_subcritical(self):
        report = livsic_report(DampingParams.from_rational(1, 3, 1.0), truncation=64)
        assert abs(report.gap) < 1e-8
        assert report.riesz_verdict
        assert report.regime == Regime.SUBCRITICAL
        assert report.consistent
        assert report.critical_correction is None

    def test_critical_plus(self):
        report = livsic_report(DampingParams.from_rational(1, 3, 2.0), truncation=64)
        assert report.gap == pytest.approx(PI / 3, abs=1e-8)
        assert report.critical_correction == pytest.approx(PI / 3)
        assert not report.riesz_verdict
        assert report.r == 2
        assert report.livsic_direction_ok

    def test_critical_minus(self):
        report = livsic_report(DampingParams.from_rational(1, 3, -2.0), truncation=64)
        assert report.gap == pytest.approx(-PI / 3, abs=1e-8)
        assert report.damping_class == DampingClass.ACCRETIVE
        assert report.f2_from_roots == pytest.approx(report.f2_direct, abs=1e-9)
        assert report.consistent

    def test_irrational_placement_is_rule_based(self):
        report = livsic_report(DampingParams.from_placement(1.0, 0.5), truncation=6)
        assert report.rule_based
        assert report.spectral_sum_closed is None
        assert report.riesz_verdict
        assert report.spectral_sum_truncated < 0.0

    def test_irrational_tail_bound_uses_strip_branches(self):
        report = livsic_report(DampingParams.from_placement(1.0, 1.0), truncation=20)
        assert report.rule_based
        assert report.riesz_verdict
        assert report.c2 <= 1.0 + 1e-12
        assert 0.0 < report.tail_bound < 1.0
        gap = abs(report.spectral_sum_truncated - report.trace_re_inverse)
        assert gap <= report.tail_bound

    def test_irrational_critical_placement(self):
        report = livsic_report(DampingParams.from_placement(1.0, 2.0), truncation=8)
        assert report.rule_based
        assert not report.riesz_verdict
        assert report.regime == Regime.CRITICAL_PLUS

    def test_rejects_zero_truncation(self):
        with pytest.raises(DomainError):
            livsic_report(DampingParams.from_rational(1, 3, 1.0), truncation=0)


class TestGraphReport:
    def test_subcritical(self):
        report = livsic_report_graph(3, 1.0, truncation=100)
        assert report.model == ModelKind.STAR
        assert report.spectral_sum_closed == pytest.approx(-PI / 3)
        assert abs(report.gap) < 1e-8
        assert report.riesz_verdict and report.consistent

    def test_critical_plus(self):
        report = livsic_report_graph(3, 3.0, truncation=20)
        assert report.gap == pytest.approx(PI)
        assert report.spectral_sum_closed == 0.0
        assert not report.riesz_verdict

    def test_critical_minus_reports_escape(self):
        report = livsic_report_graph(3, -3.0, truncation=20)
        assert report.gap == pytest.approx(-PI)
        assert any("escaped" in note for note in report.notes)

    def test_imaginary_damping(self):
        report = livsic_report_graph(2, 2j, truncation=20)
        assert report.trace_re_inverse == 0.0
        assert report.gap == pytest.approx(0.0, abs=1e-12)
        assert report.damping_class == DampingClass.SKEW_ADJOINT
