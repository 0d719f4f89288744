"""Spectral forward solver and boundary kernel: closed-form single-mode
values, cross-solver agreement, the convolution identity, and the
truncation/compatibility gates."""

import numpy as np
import pytest

from fracspec.errors import CompatibilityError, GridError, ParameterError, TruncationWarning
from fracspec.forward import kernel, solve_forward, trace, verify_duhamel
from fracspec.fraccalc import Signal
from fracspec.oracle import solve_l1
from fracspec.sturm import Potential, eigen_solve, neumann_steady

from conftest import rel_l2_gap


class TestSolveForward:
    def test_zero_input(self, spec_m1_64):
        g = Signal(np.zeros(101), 0.01)
        u = solve_forward(spec_m1_64, 0.5, g)
        assert np.all(u.values == 0.0)

    def test_single_mode_ramp_closed_form(self):
        # one constant-potential mode driven by g(t) = t has the closed form
        # u(x, t) = t (1 - E_{a,2}(-c t^a)) / c; frozen quadrature reference
        # at (a, c, t) = (0.5, 2, 1), 60-digit working precision
        spec = eigen_solve(Potential.constant(-2.0, 200), 1, refine=3)
        g = Signal.from_callable(lambda t: t, 1.0, 400)
        with pytest.warns(TruncationWarning):
            u = solve_forward(spec, 0.5, g)
        got = trace(u, 1.0).values[-1]
        assert abs(got - 0.31098074868730864) <= 1e-8

    def test_linearity(self, spec_m1_64):
        g1 = Signal.from_callable(lambda t: t * t, 1.0, 200)
        g2 = Signal.from_callable(lambda t: t**3, 1.0, 200)
        gs = Signal(g1.values + g2.values, g1.dt)
        u1 = solve_forward(spec_m1_64, 0.5, g1, tail_tol=1e-1)
        u2 = solve_forward(spec_m1_64, 0.5, g2, tail_tol=1e-1)
        us = solve_forward(spec_m1_64, 0.5, gs, tail_tol=1e-1)
        scale = np.max(np.abs(us.values))
        assert np.max(np.abs(us.values - (u1.values + u2.values))) <= 1e-10 * scale

    def test_incompatible_flux_rejected(self, spec_m1_64):
        g = Signal(np.ones(101), 0.01)  # g(0) = 1
        with pytest.raises(CompatibilityError):
            solve_forward(spec_m1_64, 0.7, g, tail_tol=1e-1)

    def test_incompatible_flux_allowed_small_order(self, spec_m1_64):
        g = Signal(np.ones(101), 0.01)
        u = solve_forward(spec_m1_64, 0.3, g, tail_tol=1e-1)
        assert np.all(np.isfinite(u.values))

    def test_truncation_warning(self, pot_minus_one, g_square):
        spec = eigen_solve(pot_minus_one, 4, refine=2)
        with pytest.warns(TruncationWarning):
            solve_forward(spec, 0.5, g_square, tail_tol=1e-2)

    def test_classical_heat_cross_check(self, pot_minus_one, spec_m1_64, g_square):
        u = solve_forward(spec_m1_64, 1.0, g_square, tail_tol=1e-1)
        u_l1 = solve_l1(pot_minus_one, 1.0, g_square, 200)
        gap = rel_l2_gap(trace(u, 1.0).values, trace(u_l1, 1.0).values, g_square.dt)
        assert gap <= 0.01


class TestKernel:
    def test_zero_time_and_monotone_at_one(self, spec_m1_64):
        t = np.linspace(0.0, 20.0, 200)
        tab = kernel(spec_m1_64, 0.5, t, tail_tol=1e-1)
        assert np.all(tab.values[:, 0] == 0.0)
        # every mode weight is positive at x = 1, so K(1, .) increases
        i1 = int(np.argmin(np.abs(tab.x_locations - 1.0)))
        assert np.all(np.diff(tab.values[i1]) > 0.0)

    def test_limit_vector_from_potential(self, pot_minus_one, spec_m1_64):
        t = np.array([1.0, 10.0])
        tab = kernel(spec_m1_64, 0.5, t, potential=pot_minus_one, tail_tol=1e-1)
        w = neumann_steady(pot_minus_one)
        assert tab.limit[0] == pytest.approx(w[0], abs=1e-12)
        assert tab.limit[-1] == pytest.approx(w[-1], abs=1e-12)

    def test_limit_deviation_decays_like_t_to_minus_alpha(self, pot_minus_one, spec_m1_64):
        alpha = 0.5
        t = np.array([1e4, 1e6])
        tab = kernel(spec_m1_64, alpha, t, potential=pot_minus_one, tail_tol=1e-1)
        i1 = int(np.argmin(np.abs(tab.x_locations - 1.0)))
        dev = tab.limit[i1] - tab.values[i1]
        # truncated-mode deficit is flat in t; compare against the tail-free part
        tail = spec_m1_64.tail_estimate()
        d0, d1 = dev[0] - tail, dev[1] - tail
        assert d0 > d1 > 0.0
        assert d0 / d1 == pytest.approx((t[1] / t[0]) ** alpha, rel=0.05)

    def test_nonuniform_times(self, spec_m1_64):
        t = np.geomspace(1e-3, 1e3, 40)
        tab = kernel(spec_m1_64, 0.5, t, tail_tol=1e-1)
        assert tab.values.shape == (2, 40)
        assert np.all(np.isfinite(tab.values))

    def test_unsorted_times_rejected(self, spec_m1_64):
        with pytest.raises(ParameterError):
            kernel(spec_m1_64, 0.5, np.array([1.0, 0.5]), tail_tol=1e-1)

    def test_off_grid_location_rejected(self, spec_m1_64):
        with pytest.raises(GridError):
            kernel(spec_m1_64, 0.5, np.array([1.0]), x_locations=(0.12345678,), tail_tol=1e-1)


class TestTrace:
    def test_zero_field(self, spec_m1_64):
        g = Signal(np.zeros(51), 0.02)
        u = solve_forward(spec_m1_64, 0.5, g)
        assert np.all(trace(u, 0).values == 0.0)
        assert np.all(trace(u, 1).values == 0.0)

    def test_initial_value_zero(self, crossval_case):
        assert trace(crossval_case["u"], 1).values[0] == 0.0

    def test_bad_endpoint(self, crossval_case):
        with pytest.raises(ParameterError):
            trace(crossval_case["u"], 0.5)


class TestDuhamel:
    def test_zero_flux(self, spec_m1_64):
        g = Signal(np.zeros(101), 0.01)
        u = solve_forward(spec_m1_64, 0.5, g)
        tab = kernel(spec_m1_64, 0.5, g.times, tail_tol=1e-1)
        assert verify_duhamel(u, tab, g) == 0.0

    @pytest.mark.parametrize("alpha", [0.5, 1.0])
    def test_residual_small(self, pot_minus_one, spec_m1_64, g_square, alpha):
        u = solve_forward(spec_m1_64, alpha, g_square, tail_tol=1e-1)
        tab = kernel(spec_m1_64, alpha, g_square.times, potential=pot_minus_one, tail_tol=1e-1)
        assert verify_duhamel(u, tab, g_square) <= 1e-3

    def test_grid_mismatch(self, spec_m1_64, g_square):
        u = solve_forward(spec_m1_64, 0.5, g_square, tail_tol=1e-1)
        other = Signal.from_callable(lambda t: t * t, 1.0, 200)
        tab = kernel(spec_m1_64, 0.5, other.times, tail_tol=1e-1)
        with pytest.raises(GridError):
            verify_duhamel(u, tab, other)


def test_cross_solver_agreement(crossval_case):
    """Spectral and L1 traces agree at both endpoints on the reference case."""
    g = crossval_case["g"]
    for ep in (0, 1):
        gap = rel_l2_gap(
            trace(crossval_case["u"], ep).values,
            trace(crossval_case["u_l1"], ep).values,
            g.dt,
        )
        assert gap <= 0.02
