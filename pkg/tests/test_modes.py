"""
tests/test_modes.py — Tests for eigenvectors, adjoint partners and the Green kernel

Run with: pytest tests/test_modes.py -v
"""

from __future__ import annotations

import math
from dataclasses import replace

import numpy as np
import pytest

from src.core.errors import NotAnEigenvalueError, PoleError
from src.core.models import DampingParams, ModeKind, SpectralWindow
from src.core.settings import DEFAULT_SETTINGS, SolverSettings
from src.modes.basis import basis_mode, energy_inner_product
from src.modes.eigenvectors import (
    adjoint_eigenfunction,
    eigenfunction,
    generalized_eigenfunction,
    jump_residual,
)
from src.modes.green import apply_resolvent, green_kernel, green_zero
from src.modes.quadrature import integrate
from src.spectrum.charfn import eval_S
from src.spectrum.solver import rational_spectrum

PI = math.pi
SQRT3 = math.sqrt(3.0)


@pytest.fixture
def subcritical():
    params = DampingParams.from_rational(1, 3, 1.0)
    spectrum = rational_spectrum(params, SpectralWindow.symmetric(6.5, 4.0))
    return params, spectrum.eigenvalues


# ── Eigenvectors ─────────────────────────────────────────────────────


class TestEigenfunction:
    def test_jump_and_dirichlet_conditions(self, subcritical):
        params, records = subcritical
        for rec in records:
            pair = eigenfunction(rec.lam, params)
            assert jump_residual(pair, params.alpha) < 1e-9
            left, right = pair.first.endpoint_values()
            scale = max(abs(pair.first.value_at_break()[0]), 1.0)
            assert abs(left) < 1e-12 * scale and abs(right) < 1e-9 * scale
            assert abs(pair.first.continuity_gap()) < 1e-9 * scale

    def test_second_component_is_lambda_times_first(self, subcritical):
        params, records = subcritical
        pair = eigenfunction(records[0].lam, params)
        x = np.linspace(0.1, 3.0, 7)
        np.testing.assert_allclose(pair.second(x), records[0].lam * pair.first(x), rtol=1e-13)

    def test_imaginary_family_uses_full_sine(self):
        params = DampingParams.from_rational(1, 3, 1.0)
        pair = eigenfunction(3j, params)
        x = np.linspace(0.0, PI, 11)
        np.testing.assert_allclose(pair.first(x), 1j * np.sin(3 * x), atol=1e-12)

    def test_rejects_non_eigenvalue(self):
        params = DampingParams.from_rational(1, 3, 1.0)
        with pytest.raises(NotAnEigenvalueError):
            eigenfunction(0.5 + 0.5j, params)

    def test_undamped_mode_with_flat_slope_at_damper(self):
        # a = π/2, λ = i: u = −sin x, so u′(a±) = 0
        params = DampingParams.from_rational(1, 2, 0.0)
        pair = eigenfunction(1j, params)
        assert jump_residual(pair, params.alpha) < 1e-12


class TestEigenfunctionOde:
    def test_finite_difference_residual(self, subcritical):
        params, records = subcritical
        h = 1e-4
        grid = np.linspace(0.0, PI, 65)
        points = [x for x in np.linspace(0.2, PI - 0.2, 9) if abs(x - params.a) > 0.05]
        for rec in records:
            u = eigenfunction(rec.lam, params).first
            scale = abs(rec.lam) ** 2 * float(np.max(np.abs(u(grid))))
            for x in points:
                second = (u(x + h) - 2 * u(x) + u(x - h)) / h**2
                assert abs(complex(second - rec.lam**2 * u(x))) < 1e-5 * scale


class TestGeneralizedEigenfunction:
    def test_double_eigenvalue_chain(self):
        params = DampingParams.from_rational(1, 3, SQRT3)
        records = rational_spectrum(params, SpectralWindow.symmetric(3.5, 4.0)).eigenvalues
        double = next(r for r in records if r.alg_multiplicity == 2)
        pair = generalized_eigenfunction(double.lam, params)
        assert pair.kind == ModeKind.GENERALIZED

        u_tilde, u = pair.first, pair.meta["parent"].first
        a, lam = params.a, double.lam
        u_a = complex(u.on("left", a))
        expected_jump = params.alpha * (u_a + lam * complex(u_tilde.on("left", a)))
        assert abs(u_tilde.slope_jump() - expected_jump) <= 1e-8 * max(abs(expected_jump), 1.0)
        assert abs(u_tilde.continuity_gap()) <= 1e-8 * max(abs(u_a), 1.0)
        left, right = u_tilde.endpoint_values()
        assert abs(left) < 1e-12 and abs(right) < 1e-9 * max(abs(u_a), 1.0)

    def test_simple_eigenvalue_has_no_chain(self, subcritical):
        params, records = subcritical
        with pytest.raises(NotAnEigenvalueError):
            generalized_eigenfunction(records[0].lam, params)


class TestAdjoint:
    def test_partner_is_conjugate_eigenvalue(self, subcritical):
        params, records = subcritical
        rec = next(r for r in records if r.family != 1)
        phi = adjoint_eigenfunction(rec.lam, params)
        assert phi.kind == ModeKind.ADJOINT
        assert phi.lam == rec.lam.conjugate()

    def test_partners_annihilate_other_eigenvectors(self, subcritical):
        params, records = subcritical
        lams = [r.lam for r in records[:6]]
        for m, lm in enumerate(lams):
            phi = adjoint_eigenfunction(lm, params)
            for n, ln in enumerate(lams):
                if m == n:
                    continue
                psi = eigenfunction(ln, params)
                scale = math.sqrt(
                    abs(energy_inner_product(phi, phi)) * abs(energy_inner_product(psi, psi))
                )
                assert abs(energy_inner_product(phi, psi)) <= 1e-9 * scale


class TestBasisModes:
    def test_orthonormal(self):
        indices = [-3, -2, -1, 1, 2, 3]
        modes = [basis_mode(j, PI / 3) for j in indices]
        gram = np.array([[energy_inner_product(x, y) for y in modes] for x in modes])
        np.testing.assert_allclose(gram, np.eye(len(indices)), atol=1e-12)

    def test_breakpoints_must_match(self):
        with pytest.raises(ValueError):
            energy_inner_product(basis_mode(1, 1.0), basis_mode(1, 2.0))


# ── Green kernel ─────────────────────────────────────────────────────


class TestGreenKernel:
    def test_undamped_kernel_at_zero(self):
        assert green_zero(PI / 2, PI / 2) == pytest.approx(-PI / 4)

    def test_kernel_at_zero_is_damping_free(self):
        params = DampingParams.from_rational(1, 3, 1.0 + 1.0j)
        kernel = green_kernel(0.0, params)
        xs = np.linspace(0.0, PI, 6)
        gx, gy = np.meshgrid(xs, xs, indexing="ij")
        np.testing.assert_allclose(kernel(gx, gy), green_zero(gx, gy), atol=1e-12)

    def test_s_value_matches_characteristic_function(self):
        params = DampingParams.from_placement(1.2, 0.4 - 0.9j)
        lam = 0.3 + 1.7j
        assert green_kernel(lam, params).s_value == pytest.approx(eval_S(lam, params), rel=1e-12)

    def test_shooting_solution_satisfies_interface(self):
        params = DampingParams.from_placement(1.2, 0.4 - 0.9j)
        lam = 0.3 + 1.7j
        u1 = green_kernel(lam, params).u1
        a = params.a
        assert abs(u1.continuity_gap()) < 1e-12
        expected = params.alpha * lam * complex(u1.on("left", a))
        assert u1.slope_jump() == pytest.approx(expected, rel=1e-11)

    def test_symmetric_in_its_arguments(self):
        params = DampingParams.from_rational(2, 5, 1.5)
        kernel = green_kernel(0.2 + 0.6j, params)
        assert complex(kernel(0.4, 2.5)) == pytest.approx(complex(kernel(2.5, 0.4)))

    def test_pole_at_eigenvalue(self):
        params = DampingParams.from_rational(1, 3, 1.0)
        with pytest.raises(PoleError):
            green_kernel(3j, params)

    def test_resolvent_solves_undamped_problem(self):
        # u″ − λ²u = 1, u(0) = u(π) = 0
        params = DampingParams.from_rational(1, 2, 0.0)
        lam = 0.7 + 0.3j
        image = apply_resolvent(
            lam, params, f=lambda y: np.zeros_like(y, dtype=complex), g=lambda y: np.ones_like(y)
        )
        x = np.array([0.3, 1.0, PI / 2, 2.2, 3.0])
        exact = (np.cosh(lam * (x - PI / 2)) / np.cosh(lam * PI / 2) - 1.0) / lam**2
        np.testing.assert_allclose(image.u(x), exact, atol=1e-10)
        np.testing.assert_allclose(image.v(x), lam * exact, atol=1e-10)

    def test_mirror_solution_satisfies_interface(self):
        params = DampingParams.from_placement(2.0, 1.0)
        lam = 0.4 + 0.3j
        u2 = green_kernel(lam, params).u2
        a = params.a
        assert abs(u2.continuity_gap()) < 1e-12
        expected = params.alpha * lam * complex(u2.on("right", a))
        assert u2.slope_jump() == pytest.approx(expected, rel=1e-11)
        _, right = u2.endpoint_values()
        assert abs(right) < 1e-14
        assert complex(u2.on("right", PI, 1)) == pytest.approx(-1.0)

    @pytest.mark.parametrize("y", [0.5, 2.6])
    def test_kernel_slope_jump_at_damper(self, y):
        params = DampingParams.from_placement(2.0, 1.0)
        lam = 0.4 + 0.3j
        kernel = green_kernel(lam, params)
        a, h = params.a, 1e-5
        right = (complex(kernel(a + h, y)) - complex(kernel(a, y))) / h
        left = (complex(kernel(a, y)) - complex(kernel(a - h, y))) / h
        expected = params.alpha * lam * complex(kernel(a, y))
        assert abs((right - left) - expected) < 1e-4 * max(abs(expected), 1e-1)

    def test_kernel_solves_homogeneous_equation_off_diagonal(self):
        params = DampingParams.from_rational(2, 5, 1.5 - 0.5j)
        lam = 0.2 + 0.6j
        kernel = green_kernel(lam, params)
        y, h = 2.3, 1e-3
        for x in (0.4, 0.9, 1.6, 2.8):
            second = (kernel(x + h, y) - 2 * kernel(x, y) + kernel(x - h, y)) / h**2
            assert abs(complex(second - lam**2 * kernel(x, y))) < 1e-5


class TestGreenReproduction:
    """(A − λ)(u, v) = (f, g) for the resolvent image, checked by finite differences."""

    PARAMS = DampingParams.from_placement(1.1, 0.6 - 0.5j)
    LAM = 0.4 + 0.8j

    @staticmethod
    def f(y):
        y = np.asarray(y, dtype=float)
        return (y * (PI - y)).astype(complex)

    @staticmethod
    def g(y):
        return np.sin(np.asarray(y, dtype=float)).astype(complex)

    @pytest.fixture(scope="class")
    def image(self):
        return apply_resolvent(self.LAM, self.PARAMS, f=self.f, g=self.g)

    def test_dirichlet_ends(self, image):
        ends = image.u(np.array([0.0, PI]))
        np.testing.assert_allclose(ends, 0.0, atol=1e-12)

    def test_first_row_is_v_minus_lambda_u(self, image):
        x = np.array([0.3, 1.7, 2.9])
        np.testing.assert_allclose(image.v(x) - self.LAM * image.u(x), self.f(x), atol=1e-12)

    def test_second_row_away_from_damper(self, image):
        h = 1e-3
        for x in (0.4, 0.8, 1.6, 2.2, 2.9):
            u = image.u(np.array([x - h, x, x + h]))
            second = (u[2] - 2 * u[1] + u[0]) / h**2
            # u″ − λv = g with v = λu + f
            residual = second - self.LAM * (self.LAM * u[1] + self.f(x)) - self.g(x)
            assert abs(complex(residual)) < 1e-5

    def test_jump_at_damper(self, image):
        a, h = self.PARAMS.a, 1e-3
        xs = np.array([a - 2 * h, a - h, a, a + h, a + 2 * h])
        u = image.u(xs)
        left = (3 * u[2] - 4 * u[1] + u[0]) / (2 * h)
        right = (-3 * u[2] + 4 * u[3] - u[4]) / (2 * h)
        va = complex(image.v(np.array([a]))[0])
        expected = self.PARAMS.alpha * va
        assert abs((right - left) - expected) < 1e-5 * max(abs(expected), 1.0)


class TestQuadrature:
    def test_integrates_oscillatory_function(self):
        value = integrate(lambda x: np.exp(7j * x), 0.0, PI, rate=7.0)
        assert value == pytest.approx((np.exp(7j * PI) - 1) / 7j, abs=1e-12)

    def test_empty_interval(self):
        assert integrate(np.cos, 1.0, 1.0) == 0j


class TestQuadratureConvergence:
    LAM = 2.0 + 15.0j

    def error(self, order: int, settings: SolverSettings = DEFAULT_SETTINGS) -> float:
        exact = (np.exp(self.LAM * PI) - 1.0) / self.LAM
        value = integrate(
            lambda x: np.exp(self.LAM * x), 0.0, PI, rate=abs(self.LAM), order=order, settings=settings
        )
        return abs(value - exact) / abs(exact)

    def test_error_falls_with_node_doubling(self):
        errors = [self.error(order) for order in (2, 4, 8)]
        assert errors[0] > errors[1] > errors[2]
        assert self.error(32) < 1e-12

    def test_error_falls_with_panel_doubling(self):
        errors = [
            self.error(4, replace(DEFAULT_SETTINGS, panel_phase=phase)) for phase in (6.0, 3.0, 1.5)
        ]
        assert errors[0] > errors[1] > errors[2]
        assert errors[2] < 1e-3 * errors[0]
