"""
tests/test_basis.py — Tests for Gram conditioning, coverage, biorthogonality and the HS norm

Run with: pytest tests/test_basis.py -v
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from src.core.models import DampingParams, SpectralWindow
from src.modes.basis import (
    biorthogonal_system,
    coverage_deficit,
    gram_condition,
    gram_ladder,
    gram_matrix,
    hs_norm,
    root_vectors,
)
from src.spectrum.solver import rational_spectrum

PI = math.pi


# ── Gram matrix ──────────────────────────────────────────────────────


class TestGram:
    def test_undamped_modes_are_orthonormal(self):
        params = DampingParams.from_rational(1, 3, 0.0)
        assert gram_condition(params, SpectralWindow.symmetric(8.5, 4.0)) == pytest.approx(
            1.0, abs=1e-8
        )

    def test_undamped_centre_is_orthonormal(self):
        # half the modes have u′(π/2) = 0
        params = DampingParams.from_rational(1, 2, 0.0)
        assert gram_condition(params, SpectralWindow.symmetric(6.5, 4.0)) == pytest.approx(
            1.0, abs=1e-8
        )

    def test_root_vectors_have_unit_norm(self):
        params = DampingParams.from_rational(1, 3, 1.0)
        records = rational_spectrum(params, SpectralWindow.symmetric(4.5, 4.0)).eigenvalues
        gram = gram_matrix(root_vectors(records, params))
        np.testing.assert_allclose(np.diag(gram).real, 1.0, atol=1e-12)
        np.testing.assert_allclose(gram, gram.conj().T, atol=1e-14)

    def test_double_eigenvalue_adds_generalized_vector(self):
        params = DampingParams.from_rational(1, 3, math.sqrt(3.0))
        records = rational_spectrum(params, SpectralWindow.symmetric(3.5, 4.0)).eigenvalues
        modes = root_vectors(records, params)
        assert len(modes) == sum(r.alg_multiplicity for r in records)

    def test_subcritical_centre_bounded_by_root_modulus(self):
        # (1, 2, 1): the off-axis family has |ζ|² = 9
        params = DampingParams.from_rational(1, 2, 1.0)
        ladder = gram_ladder(params, sizes=(8, 16))
        assert all(1.5 < cond < 9.0 for cond in ladder.values())
        assert max(ladder.values()) / min(ladder.values()) <= 1.5

    def test_adjoint_damping_has_same_condition(self):
        params = DampingParams.from_rational(1, 3, 1.0 + 0.5j)
        window = SpectralWindow.symmetric(6.5, 4.0)
        direct = gram_condition(params, window)
        adjoint = gram_condition(params.adjoint(), window)
        assert direct == pytest.approx(adjoint, rel=1e-6)


# ── Coverage ─────────────────────────────────────────────────────────


class TestCoverage:
    def test_critical_centre_misses_odd_modes(self):
        report = coverage_deficit(DampingParams.from_rational(1, 2, 2.0), truncation=8)
        assert report.deficit_fraction == pytest.approx(0.5)
        assert report.max_distance == pytest.approx(1.0, abs=1e-10)
        even = [d for j, d in zip([*range(-8, 0), *range(1, 9)], report.distances) if j % 2 == 0]
        assert max(even) < 1e-10

    def test_subcritical_centre_covers_most_modes(self):
        report = coverage_deficit(DampingParams.from_rational(1, 2, 1.0), truncation=8)
        assert np.mean(report.distances) < 0.25
        assert report.max_distance < 1.0

    def test_rejects_empty_truncation(self):
        with pytest.raises(ValueError):
            coverage_deficit(DampingParams.from_rational(1, 2, 1.0), truncation=0)


# ── Biorthogonality ──────────────────────────────────────────────────


class TestBiorthogonal:
    def test_pairs_are_biorthogonal(self):
        params = DampingParams.from_rational(1, 3, 1.0)
        records = rational_spectrum(params, SpectralWindow.symmetric(6.5, 4.0)).eigenvalues
        system = biorthogonal_system(records, params, count=10)
        assert len(system.modes) == 10
        assert system.residual_norm() < 1e-6

    def test_double_eigenvalues_are_skipped(self):
        params = DampingParams.from_rational(1, 3, math.sqrt(3.0))
        records = rational_spectrum(params, SpectralWindow.symmetric(3.5, 4.0)).eigenvalues
        system = biorthogonal_system(records, params)
        assert len(system.modes) == sum(1 for r in records if r.alg_multiplicity == 1)
        assert system.residual_norm() < 1e-6


# ── Hilbert–Schmidt norm ─────────────────────────────────────────────


class TestHSNorm:
    def test_undamped_value(self):
        report = hs_norm(DampingParams.from_rational(1, 3, 0.0), truncation=10)
        assert report.closed_bound == pytest.approx(PI**2 / 3)

    @pytest.mark.parametrize("alpha", [0.0, 1.0, 1.0 + 2.0j, -3.0j])
    def test_mode_sum_converges_to_closed_form(self, alpha):
        n = 200
        report = hs_norm(DampingParams.from_placement(1.1, alpha), truncation=n)
        gap = report.closed_bound - report.truncated_sum
        assert 0.0 <= gap <= (2.0 + abs(alpha) ** 2) / n

    def test_centre_meets_placement_free_bound(self):
        report = hs_norm(DampingParams.from_rational(1, 2, 2.0), truncation=50)
        assert report.closed_bound == pytest.approx(7 * PI**2 / 12)
        assert report.a_independent_bound == pytest.approx(report.closed_bound)

    def test_placement_free_bound_dominates(self):
        for a in (0.2, 0.9, 1.7, 2.8):
            report = hs_norm(DampingParams.from_placement(a, 1.5 - 0.5j), truncation=5)
            assert report.closed_bound <= report.a_independent_bound + 1e-12
