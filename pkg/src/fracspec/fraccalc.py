"""Discrete fractional calculus on uniform time grids.

Provides the Riemann-Liouville integral J^alpha by product-trapezoid
convolution quadrature (exact for piecewise-linear input), the L1 Caputo
derivative, and the compatibility diagnostics that stand in for membership
in the fractional space H_alpha(0,T): a sampled signal cannot certify
H_alpha membership, but g(0) = 0 (required for alpha >= 1/2) and the
round-trip residual J^alpha applied to the L1 derivative are its testable
shadows.

Fractional orders are plain floats validated by ``validation.validate_order``;
the open interval (0,1) is the admissible range, with alpha = 1 admitted
where an operation documents its classical limit.  The weighted H_{1/2}
norm (with the 1/t factor) is deliberately not implemented; no operation
consumes it and samples cannot resolve the t -> 0 weight.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import rgamma

from .errors import ParameterError
from .validation import validate_order

__all__ = ["Signal", "rl_integral", "caputo_l1", "halpha_check", "HalphaDiagnostics"]


@dataclass
class Signal:
    """Uniformly sampled time series on [0, T], samples at t_k = k*dt."""

    values: np.ndarray
    dt: float

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 1 or self.values.size < 2:
            raise ParameterError("signal needs at least two samples on a 1-D grid")
        if not np.all(np.isfinite(self.values)):
            raise ParameterError("signal contains non-finite values")
        self.dt = float(self.dt)
        if not (np.isfinite(self.dt) and self.dt > 0.0):
            raise ParameterError("dt must be positive")

    @property
    def m_steps(self) -> int:
        return self.values.size - 1

    @property
    def duration(self) -> float:
        return self.m_steps * self.dt

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.values.size) * self.dt

    @classmethod
    def from_callable(cls, fn, duration: float, m_steps: int) -> "Signal":
        dt = float(duration) / int(m_steps)
        t = np.arange(int(m_steps) + 1) * dt
        return cls(np.asarray([fn(tk) for tk in t], dtype=float), dt)


@lru_cache(maxsize=64)
def _rl_weights(m_steps: int, alpha: float):
    """Product-trapezoid convolution weights for J^alpha.

    With g piecewise linear on the grid,
        J^alpha g(t_n) = dt^alpha/Gamma(alpha+2) *
            [ b_n g_0 + sum_{m=1}^{n-1} c_m g_{n-m} + g_n ],
        c_m = (m+1)^(alpha+1) + (m-1)^(alpha+1) - 2 m^(alpha+1),
        b_n = (n-1)^(alpha+1) - n^alpha (n - alpha - 1),
    which reduces to the composite trapezoid rule at alpha = 1.
    lru_cache provides the synchronized memoization (locked internally).
    """
    n = np.arange(m_steps + 1, dtype=float)
    ap1 = alpha + 1.0
    c = np.zeros(m_steps + 1)
    if m_steps >= 1:
        m = n[1:]
        c[1:] = (m + 1.0) ** ap1 + (m - 1.0) ** ap1 - 2.0 * m**ap1
    b = np.zeros(m_steps + 1)
    if m_steps >= 1:
        nn = n[1:]
        b[1:] = (nn - 1.0) ** ap1 - nn**alpha * (nn - alpha - 1.0)
    c.setflags(write=False)
    b.setflags(write=False)
    return c, b


def rl_integral(g: Signal, alpha: float) -> Signal:
    """Riemann-Liouville integral J^alpha g on the grid of g.

    Exact for piecewise-linear g; output sample 0 is exactly 0.
    """
    a = validate_order(alpha, classical=True)
    m_steps = g.m_steps
    c, b = _rl_weights(m_steps, a)
    scale = g.dt**a * float(rgamma(a + 2.0))
    vals = g.values
    # full convolution against c captures the interior sum; the m=n term it
    # picks up (c_n g_0) is replaced by the boundary weight b_n g_0.
    conv = np.convolve(c, vals)[: m_steps + 1]
    out = scale * (conv - c * vals[0] + b * vals[0] + vals)
    out[0] = 0.0
    return Signal(out, g.dt)


@lru_cache(maxsize=64)
def _l1_weights(m_steps: int, alpha: float):
    """L1 weights b_j = (j+1)^(1-alpha) - j^(1-alpha); backward diff at alpha=1."""
    j = np.arange(m_steps, dtype=float)
    jpow = j ** (1.0 - alpha)
    jpow[0] = 0.0  # 0^0 must be 0 here so that b_0 -> 1 in the alpha = 1 limit
    b = (j + 1.0) ** (1.0 - alpha) - jpow
    b.setflags(write=False)
    return b


def caputo_l1(g: Signal, alpha: float) -> Signal:
    """L1 discretization of the Caputo derivative of order alpha.

    (d^alpha g)(t_k) ~ dt^(-alpha)/Gamma(2-alpha) *
        sum_{j=0}^{k-1} b_j (g_{k-j} - g_{k-j-1}).

    The value at t_0 is set to 0 (no history).  At alpha = 1 the weights
    collapse to first-order backward differences.
    """
    a = validate_order(alpha, classical=True)
    m_steps = g.m_steps
    b = _l1_weights(m_steps, a)
    diff = np.diff(g.values)
    # sum_j b_j diff_{k-1-j} over j < k is the full convolution shifted by one
    conv = np.convolve(b, diff)[:m_steps]
    out = np.zeros(m_steps + 1)
    out[1:] = g.dt ** (-a) * float(rgamma(2.0 - a)) * conv
    return Signal(out, g.dt)


@dataclass(frozen=True)
class HalphaDiagnostics:
    """Outcome of the sampled compatibility check."""

    passed: bool
    g0: float
    g0_required: bool
    roundtrip_residual: float

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        state = "pass" if self.passed else "fail"
        return (
            f"halpha_check: {state} (g(0)={self.g0:.3e}, "
            f"required={self.g0_required}, roundtrip={self.roundtrip_residual:.3e})"
        )


def halpha_check(g: Signal, alpha: float, *, g0_tol: float = 1e-12) -> HalphaDiagnostics:
    """Testable shadow of H_alpha(0,T) membership for a sampled signal.

    Checks g(0) = 0 (hard requirement for alpha >= 1/2, advisory below) and
    reports the relative L2 round-trip residual || J^alpha(L1 d^alpha g) - g ||.
    """
    a = validate_order(alpha, classical=True)
    g0 = float(g.values[0])
    required = a >= 0.5
    g0_ok = abs(g0) <= g0_tol
    norm = float(np.sqrt(np.trapezoid(g.values**2, dx=g.dt)))
    if norm == 0.0:
        residual = 0.0
    else:
        back = rl_integral(caputo_l1(g, a), a)
        diff = back.values - g.values
        residual = float(np.sqrt(np.trapezoid(diff**2, dx=g.dt))) / norm
    passed = g0_ok if required else True
    return HalphaDiagnostics(passed=passed, g0=g0, g0_required=required, roundtrip_residual=residual)
