"""
tests/test_spectrum.py — Tests for the rational and contour spectrum solvers

Run with: pytest tests/test_spectrum.py -v
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from src.core.errors import ConvergenceError
from src.core.models import DampingParams, SpectralWindow
from src.spectrum.charfn import eval_S
from src.spectrum.contour import (
    asymptotic_spacing,
    count_zeros,
    locate_eigenvalues,
    newton_refine,
)
from src.spectrum.solver import compute_spectrum, contour_spectrum, rational_spectrum

SQRT3 = math.sqrt(3.0)


def sorted_lams(values) -> np.ndarray:
    return np.array(sorted(values, key=lambda z: (round(z.imag, 6), z.real)))


# ── Rational placements ──────────────────────────────────────────────


class TestRationalSpectrum:
    def test_critical_centre_is_even_integers(self):
        params = DampingParams.from_rational(1, 2, 2.0)
        result = rational_spectrum(params, SpectralWindow.symmetric(7.0, 4.0))
        assert [r.lam for r in result.eigenvalues] == [-6j, -4j, -2j, 2j, 4j, 6j]
        assert all(r.family == 1 for r in result.eigenvalues)
        assert all(r.residual < 1e-10 for r in result.eigenvalues)

    def test_undamped_centre_is_all_integers(self):
        params = DampingParams.from_rational(1, 2, 0.0)
        result = rational_spectrum(params, SpectralWindow.symmetric(5.5, 2.0))
        ims = sorted(r.im for r in result.eigenvalues)
        np.testing.assert_allclose(ims, [-5, -4, -3, -2, -1, 1, 2, 3, 4, 5], atol=1e-12)
        assert all(abs(r.re) < 1e-12 for r in result.eigenvalues)

    def test_subcritical_families(self):
        params = DampingParams.from_rational(1, 3, 1.0)
        result = rational_spectrum(params, SpectralWindow.symmetric(6.5, 4.0))
        assert result.total_multiplicity == 12
        off_axis = [r for r in result.eigenvalues if r.family != 1]
        expected_re = -(3.0 / (4.0 * math.pi)) * math.log(3.0)
        assert all(r.re == pytest.approx(expected_re, rel=1e-10) for r in off_axis)
        for r in result.eigenvalues:
            assert abs(eval_S(r.lam, params)) < 1e-8

    def test_double_eigenvalues_detected(self):
        params = DampingParams.from_rational(1, 3, SQRT3)
        result = rational_spectrum(params, SpectralWindow.symmetric(6.5, 4.0))
        doubles = [r for r in result.eigenvalues if r.family != 1]
        assert doubles and all(r.alg_multiplicity == 2 for r in doubles)
        expected_re = -(3 / (2 * math.pi)) * math.log(2 + SQRT3)
        assert all(r.re == pytest.approx(expected_re) for r in doubles)
        assert all(r.alg_multiplicity == 1 for r in result.eigenvalues if r.family == 1)

    def test_escaped_family_at_minus_two(self):
        params = DampingParams.from_rational(1, 3, -2.0)
        result = rational_spectrum(params, SpectralWindow.symmetric(6.5, 4.0))
        assert sum(r.multiplicity for r in result.escaped) == 1
        assert {r.family for r in result.eigenvalues} == {1, 2}

    def test_default_window_covers_every_family(self):
        params = DampingParams.from_rational(2, 5, 3.0 - 1.0j)
        result = compute_spectrum(params, im_max=6.0)
        assert result.method == "rational"
        families = {r.family for r in result.eigenvalues}
        assert families == set(range(1, 6))

    def test_adjoint_spectrum_is_reflected(self):
        params = DampingParams.from_rational(1, 3, 1.0 + 0.5j)
        window = SpectralWindow.symmetric(6.5, 4.0)
        direct = rational_spectrum(params, window).eigenvalues
        adjoint = rational_spectrum(params.adjoint(), window).eigenvalues
        reflected = [-r.lam.conjugate() for r in direct]
        np.testing.assert_allclose(
            sorted_lams(r.lam for r in adjoint), sorted_lams(reflected), atol=1e-10
        )


# ── Contour path ─────────────────────────────────────────────────────


class TestContourSpectrum:
    def test_count_matches_rational(self):
        params = DampingParams.from_rational(1, 3, 1.0)
        assert count_zeros(SpectralWindow.symmetric(6.5, 4.0), params) == 12

    @pytest.mark.parametrize("alpha", [1.0, -1.0, 1j, SQRT3])
    def test_agrees_with_rational_path(self, alpha):
        params = DampingParams.from_rational(1, 3, alpha)
        window = SpectralWindow.symmetric(6.5, 4.0)
        rational = rational_spectrum(params, window).eigenvalues
        contour = contour_spectrum(params, window).eigenvalues
        assert sum(r.alg_multiplicity for r in contour) == sum(r.alg_multiplicity for r in rational)
        np.testing.assert_allclose(
            sorted_lams(r.lam for r in contour), sorted_lams(r.lam for r in rational), atol=1e-8
        )

    def test_irrational_placement(self):
        params = DampingParams.from_placement(1.0, 1.0 + 0.5j)
        window = SpectralWindow.symmetric(5.5, 4.0)
        result = compute_spectrum(params, window)
        assert result.method == "contour"
        assert result.total_multiplicity == count_zeros(window, params)
        for r in result.eigenvalues:
            assert abs(eval_S(r.lam, params)) < 1e-8

    def test_undamped_irrational_placement_has_integer_spectrum(self):
        params = DampingParams.from_placement(1.0, 0.0)
        result = contour_spectrum(params, SpectralWindow.symmetric(4.5, 2.0))
        ims = sorted(r.im for r in result.eigenvalues)
        np.testing.assert_allclose(ims, [-4, -3, -2, -1, 1, 2, 3, 4], atol=1e-9)

    def test_branches_are_signed_ranks(self):
        params = DampingParams.from_placement(1.0, 0.0)
        result = contour_spectrum(params, SpectralWindow.symmetric(3.5, 2.0))
        assert sorted(r.branch for r in result.eigenvalues) == [-3, -2, -1, 1, 2, 3]


class TestNewtonRefine:
    def test_converges_to_nearby_eigenvalue(self):
        params = DampingParams.from_rational(1, 3, 1.0)
        rec = newton_refine(3j + 0.05, params)
        assert rec.lam == pytest.approx(3j, abs=1e-10)
        assert rec.family == 1
        assert rec.iterations >= 1

    def test_double_root_step(self):
        params = DampingParams.from_rational(1, 3, SQRT3)
        target = -(3 / (2 * math.pi)) * complex(math.log(2 + SQRT3), math.pi)
        rec = newton_refine(target + 0.02 + 0.02j, params)
        assert rec.lam == pytest.approx(target, abs=1e-6)
        assert rec.alg_multiplicity == 2

    def test_removable_root_at_zero_is_rejected(self):
        params = DampingParams.from_placement(1.0, 0.0)
        with pytest.raises(ConvergenceError):
            newton_refine(1e-3, params)


class TestAsymptoticSpacing:
    def test_subcritical_spacing_is_one(self):
        assert asymptotic_spacing(DampingParams.from_rational(1, 3, 1.0)) == 1.0

    def test_critical_spacing(self):
        params = DampingParams.from_rational(1, 3, 2.0)
        assert asymptotic_spacing(params) == pytest.approx(1.5)


class TestNewtonFailure:
    def test_undamped_seed_converges_to_first_eigenvalue(self):
        params = DampingParams.from_placement(1.0, 0.0)
        rec = newton_refine(0.99j, params)
        assert abs(rec.lam - 1j) < 1e-13

    def test_flat_seed_off_the_spectrum_fails(self):
        # α = 0: F′ = π·cosh(λπ) vanishes at i/2 while F(i/2) = i
        params = DampingParams.from_placement(1.0, 0.0)
        with pytest.raises(ConvergenceError):
            newton_refine(0.5j, params)


# ── Counting and cross-checks ────────────────────────────────────────


def _quarters(window: SpectralWindow, re_cut: float, im_cut: float) -> list[SpectralWindow]:
    return [
        SpectralWindow(re_min=lo_re, re_max=hi_re, im_min=lo_im, im_max=hi_im)
        for lo_re, hi_re in ((window.re_min, re_cut), (re_cut, window.re_max))
        for lo_im, hi_im in ((window.im_min, im_cut), (im_cut, window.im_max))
    ]


class TestCountAdditivity:
    @pytest.mark.parametrize("seed", range(4))
    def test_counts_add_over_partitions(self, seed):
        rng = np.random.default_rng(seed)
        params = (
            DampingParams.from_rational(1, 3, 1.0)
            if seed % 2 == 0
            else DampingParams.from_placement(1.0, 1.0 + 0.5j)
        )
        window = SpectralWindow.symmetric(6.5, 4.0)
        re_cut = float(rng.uniform(-3.5, 3.5))
        im_cut = float(rng.uniform(-6.0, 6.0))
        total = count_zeros(window, params)
        parts = sum(count_zeros(cell, params) for cell in _quarters(window, re_cut, im_cut))
        assert parts == total

    def test_bisection_halves_add_up(self):
        params = DampingParams.from_rational(2, 5, 0.7 - 0.4j)
        window = SpectralWindow.symmetric(5.5, 4.0)
        lower, upper = window.split(0.5)
        assert count_zeros(lower, params) + count_zeros(upper, params) == count_zeros(
            window, params
        )


def _random_placements(count: int, seed: int) -> list[tuple[int, int, complex]]:
    rng = np.random.default_rng(seed)
    cases = []
    while len(cases) < count:
        q = int(rng.integers(2, 7))
        p = int(rng.integers(1, q))
        if math.gcd(p, q) != 1:
            continue
        alpha = 10.0 * math.sqrt(rng.uniform()) * complex(np.exp(2j * math.pi * rng.uniform()))
        if min(abs(alpha - 2.0), abs(alpha + 2.0)) < 0.1:
            continue
        cases.append((p, q, alpha))
    return cases


class TestContourAgainstRational:
    @pytest.mark.parametrize("p,q,alpha", _random_placements(20, seed=7))
    def test_random_placements_agree(self, p, q, alpha):
        params = DampingParams.from_rational(p, q, alpha)
        reference = rational_spectrum(params, im_max=20.0)
        window = reference.window
        contour = contour_spectrum(params, window).eigenvalues
        assert sum(r.alg_multiplicity for r in contour) == reference.total_multiplicity
        np.testing.assert_allclose(
            sorted_lams(r.lam for r in contour),
            sorted_lams(r.lam for r in reference.eigenvalues),
            atol=1e-9,
        )

    @pytest.mark.parametrize("p,q,alpha", _random_placements(20, seed=7))
    def test_adjoint_reflects_spectrum(self, p, q, alpha):
        params = DampingParams.from_rational(p, q, alpha)
        direct = rational_spectrum(params, im_max=20.0)
        adjoint = rational_spectrum(params.adjoint(), direct.window).eigenvalues
        reflected = [-r.lam.conjugate() for r in direct.eigenvalues]
        assert len(adjoint) == len(reflected)
        np.testing.assert_allclose(
            sorted_lams(r.lam for r in adjoint), sorted_lams(reflected), atol=1e-10
        )

    def test_eigenvalues_on_the_window_edge_are_not_duplicated(self):
        # family 1 sits at Im λ = ±20 exactly; the count runs on a dilated window
        alpha = -3.7146 + 0.1191j
        params = DampingParams.from_rational(1, 2, alpha)
        window = SpectralWindow.default_for(alpha, 20.0)
        rational = rational_spectrum(params, window).eigenvalues
        contour = contour_spectrum(params, window).eigenvalues
        assert len(contour) == len(rational)
        assert all(abs(r.im) <= 20.0 + 1e-9 for r in contour)
        assert any(abs(r.lam - 20j) < 1e-9 for r in contour)

    def test_double_eigenvalue_by_contour(self):
        params = DampingParams.from_rational(1, 3, SQRT3)
        target = -(3 / (2 * math.pi)) * complex(math.log(2 + SQRT3), -3 * math.pi)
        window = SpectralWindow(re_min=-1.0, re_max=0.0, im_min=4.0, im_max=5.0)
        records = locate_eigenvalues(window, params)
        assert len(records) == 1
        assert records[0].alg_multiplicity == 2
        assert abs(records[0].lam - target) < 1e-8


class TestPlacementContinuity:
    def test_eigenvalues_move_continuously_in_a(self):
        alpha = 1.0 + 0.5j
        window = SpectralWindow.symmetric(4.5, 4.0)
        before = contour_spectrum(DampingParams.from_placement(1.0, alpha), window).eigenvalues
        after = contour_spectrum(DampingParams.from_placement(1.0 + 1e-4, alpha), window).eigenvalues
        inner = [r.lam for r in before if abs(r.im) < 4.0]
        moved = np.array([r.lam for r in after])
        assert inner
        for lam in inner:
            assert np.min(np.abs(moved - lam)) < 5e-3

    def test_sweep_through_rational_placement(self):
        alpha = 1.0
        window = SpectralWindow.symmetric(3.5, 4.0)
        anchor = rational_spectrum(DampingParams.from_rational(1, 3, alpha), window).eigenvalues
        near = contour_spectrum(
            DampingParams.from_placement(math.pi / 3 + 1e-5, alpha), window
        ).eigenvalues
        assert len(near) == len(anchor)
        np.testing.assert_allclose(
            sorted_lams(r.lam for r in near), sorted_lams(r.lam for r in anchor), atol=1e-3
        )
