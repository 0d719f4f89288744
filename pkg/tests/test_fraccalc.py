"""Discrete fractional calculus: Riemann-Liouville integration, the L1
derivative, and the sampled-signal compatibility diagnostics."""

import numpy as np
import pytest
from scipy.special import gamma

from fracspec.errors import ParameterError
from fracspec.fraccalc import Signal, caputo_l1, halpha_check, rl_integral


class TestSignal:
    def test_from_callable_grid(self):
        g = Signal.from_callable(lambda t: 3.0 * t, 2.0, 8)
        assert g.m_steps == 8
        assert g.duration == pytest.approx(2.0)
        assert np.allclose(g.values, 3.0 * g.times)

    def test_too_short(self):
        with pytest.raises(ParameterError):
            Signal(np.array([1.0]), 0.1)

    def test_bad_dt(self):
        with pytest.raises(ParameterError):
            Signal(np.zeros(5), 0.0)

    def test_non_finite(self):
        with pytest.raises(ParameterError):
            Signal(np.array([0.0, np.nan, 1.0]), 0.1)


class TestRLIntegral:
    def test_zero_signal(self):
        g = Signal(np.zeros(11), 0.1)
        assert np.all(rl_integral(g, 0.5).values == 0.0)

    def test_order_one_is_plain_integration(self):
        g = Signal(np.ones(101), 0.01)
        out = rl_integral(g, 1.0)
        assert np.max(np.abs(out.values - g.times)) <= 1e-12

    def test_half_integral_of_identity(self):
        # J^{1/2} t = t^{3/2} / Gamma(5/2)
        g = Signal.from_callable(lambda t: t, 1.0, 1000)
        out = rl_integral(g, 0.5)
        expected = 1.0 / gamma(2.5)
        assert abs(out.values[-1] - expected) / expected <= 1e-4

    @pytest.mark.parametrize("alpha,beta", [(0.3, 1.0), (0.5, 2.0), (0.8, 1.5)])
    def test_power_rule(self, alpha, beta):
        # J^a t^b = Gamma(b+1)/Gamma(b+1+a) t^{b+a}
        g = Signal.from_callable(lambda t: t**beta, 1.0, 2000)
        out = rl_integral(g, alpha)
        expected = gamma(beta + 1.0) / gamma(beta + 1.0 + alpha)
        assert abs(out.values[-1] - expected) / expected <= 1e-3


class TestCaputoL1:
    def test_zero_signal(self):
        g = Signal(np.zeros(11), 0.1)
        assert np.all(caputo_l1(g, 0.5).values == 0.0)

    def test_half_derivative_of_identity(self):
        # d^{1/2} t = t^{1/2} / Gamma(3/2)
        g = Signal.from_callable(lambda t: t, 1.0, 2000)
        out = caputo_l1(g, 0.5)
        expected = 1.0 / gamma(1.5)
        assert abs(out.values[-1] - expected) / expected <= 2e-3

    def test_classical_limit_is_backward_euler(self):
        g = Signal.from_callable(lambda t: t * t, 1.0, 500)
        out = caputo_l1(g, 1.0)
        # backward difference of t^2 is 2t - dt exactly
        err = np.abs(out.values[1:] - 2.0 * g.times[1:])
        assert np.max(err) <= 1.01 * g.dt


class TestHalphaCheck:
    def test_smooth_vanishing_signal_passes(self):
        g = Signal.from_callable(lambda t: t * t, 1.0, 1000)
        diag = halpha_check(g, 0.7)
        assert diag.passed
        assert diag.roundtrip_residual <= 1e-2

    def test_nonzero_start_fails_above_half(self):
        g = Signal(np.ones(101), 0.01)
        diag = halpha_check(g, 0.7)
        assert not diag.passed
        assert diag.g0_required

    def test_nonzero_start_advisory_below_half(self):
        g = Signal(np.ones(101), 0.01)
        diag = halpha_check(g, 0.3)
        assert diag.passed
        assert not diag.g0_required

    def test_zero_signal(self):
        diag = halpha_check(Signal(np.zeros(64), 0.01), 0.7)
        assert diag.passed
        assert diag.roundtrip_residual == 0.0


def test_roundtrip_convergence_order():
    # || J^a (d^a_L1 g) - g ||_inf should shrink at order >= 0.9 in dt
    errs = []
    for m in (250, 500, 1000):
        g = Signal.from_callable(lambda t: t * t, 1.0, m)
        back = rl_integral(caputo_l1(g, 0.5), 0.5)
        errs.append(np.max(np.abs(back.values - g.values)) / np.max(g.values))
    orders = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    assert np.all(orders >= 0.9)
