"""Two-parameter Mittag-Leffler function on the real axis.

The function

    E(z; gamma1, gamma2) = sum_{k>=0} z^k / Gamma(gamma1*k + gamma2)

generalizes the exponential (gamma1 = gamma2 = 1) and governs relaxation in
time-fractional diffusion: every mode of the forward solution decays like
E(-lambda_n t^gamma1; gamma1, 1).

No single formula evaluates E accurately across the whole negative axis in
double precision, so evaluation is split into three regimes:

* Taylor series with compensated (Kahan) summation near the origin.  The
  alternating series loses roughly |z|**(1/gamma1) digits to cancellation
  (the largest term has that magnitude in log), so the series region is
  capped at |z| <= min(r_switch, 10**gamma1) regardless of the configured
  switch radius.
* A Laplace-inversion contour quadrature in the mid range.  E is the inverse
  transform of s**(gamma1-gamma2)/(s**gamma1 - z) at time 1; the Bromwich
  line is deformed onto a parabola wrapping the negative axis and the
  integral is evaluated by a fixed-node trapezoid rule, which converges
  geometrically for this analytic integrand.
* The algebraic asymptotic expansion -sum_{k>=1} z^(-k)/Gamma(gamma2 -
  gamma1*k) far out on the negative axis, truncated at its smallest term.
  Reciprocal-gamma factors are evaluated with scipy's entire rgamma, so
  expansion terms whose Gamma argument hits a non-positive integer
  contribute exactly zero instead of a spurious infinity.

Accuracy on z <= 0 for gamma1 in (0, 1]: absolute error around 1e-12 for
|z| <= 10, relative error well under 1e-8 out to z = -1e8 and beyond.
Positive arguments are supported only in the classical gamma1 = 1 family,
via exp and the regularized incomplete gamma.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gammainc, rgamma

from .errors import DomainError, NumericError, ParameterError
from .validation import validate_order

__all__ = [
    "MLQuery",
    "ml_eval",
    "mittag_leffler",
    "ml_kernel_integral",
    "ml_laplace",
]

# Largest safe magnitude of ln(max series term); beyond this the alternating
# series cannot reach the accuracy contract in double precision.
_SERIES_DIGIT_GUARD = 10.0

# Parabolic contour scale.  Re s <= mu on the contour, so roundoff in the
# quadrature sum is of order exp(mu)*eps; mu = 6 keeps that near 4e-14 while
# the node spacing below still over-resolves the integrand.
_CONTOUR_MU = 6.0


@dataclass(frozen=True)
class MLQuery:
    """A single evaluation request E(z; gamma1, gamma2).

    Accuracy is guaranteed for real z <= 0 (any gamma1 in (0, 1]) and for
    the classical exponential family gamma1 = 1 on the whole real line.
    """

    gamma1: float
    gamma2: float
    z: float

    def __post_init__(self) -> None:
        if not (np.isfinite(self.gamma1) and self.gamma1 > 0.0):
            raise ParameterError("gamma1 must be a positive finite real")
        if not (np.isfinite(self.gamma2) and self.gamma2 > 0.0):
            raise ParameterError("gamma2 must be a positive finite real")
        if not np.isfinite(self.z):
            raise ParameterError("z must be finite")


def ml_eval(q: MLQuery) -> float:
    """Evaluate a single MLQuery."""
    return float(mittag_leffler(q.z, q.gamma1, q.gamma2))


def mittag_leffler(
    z,
    gamma1: float,
    gamma2: float = 1.0,
    *,
    r_switch: float = 5.0,
    z_big: float = 50.0,
    contour_nodes: int = 200,
):
    """Vectorized E(z; gamma1, gamma2) for real z.

    Parameters
    ----------
    z : array_like
        Real argument(s); z <= 0 for gamma1 < 1, any real for gamma1 = 1.
    gamma1, gamma2 : float
        Orders, gamma1 in (0, 1], gamma2 > 0.
    r_switch, z_big : float
        Regime boundaries on the negative axis: series for |z| <= r_switch
        (tightened by the cancellation guard), asymptotics for z <= -z_big,
        contour quadrature in between.
    contour_nodes : int
        Trapezoid nodes on the half contour.
    """
    g1 = float(gamma1)
    g2 = float(gamma2)
    if not (np.isfinite(g1) and 0.0 < g1 <= 1.0):
        raise ParameterError(f"gamma1 must lie in (0, 1], got {gamma1!r}")
    if not (np.isfinite(g2) and g2 > 0.0):
        raise ParameterError(f"gamma2 must be positive, got {gamma2!r}")
    if not (0.0 < r_switch < z_big):
        raise ParameterError("need 0 < r_switch < z_big")
    if contour_nodes < 16:
        raise ParameterError("contour_nodes too small for the accuracy contract")

    z_in = np.asarray(z, dtype=float)
    scalar = z_in.ndim == 0
    zf = np.atleast_1d(z_in)
    if not np.all(np.isfinite(zf)):
        raise ParameterError("z contains non-finite values")

    if g1 == 1.0 and g2 == 1.0:
        out = np.exp(zf)
        return float(out[0]) if scalar else out

    out = np.empty_like(zf)
    pos = zf > 0.0
    if np.any(pos):
        if g1 < 1.0:
            raise DomainError(
                "z > 0 is supported only for gamma1 = 1; accuracy is not "
                "guaranteed on the positive axis otherwise"
            )
        out[pos] = _exp_family_positive(zf[pos], g2, r_switch)

    neg = ~pos
    if np.any(neg):
        zb = -zf[neg]  # zb >= 0
        sub = np.empty_like(zb)
        # Cancellation guard: series only while |z|**(1/g1) <= digit guard.
        r_series = min(r_switch, _SERIES_DIGIT_GUARD**g1)
        m_ser = zb <= r_series
        m_asy = zb >= z_big
        m_con = ~(m_ser | m_asy)
        if np.any(m_ser):
            sub[m_ser] = _series(-zb[m_ser], g1, g2)
        if np.any(m_con):
            sub[m_con] = _contour(zb[m_con], g1, g2, contour_nodes)
        if np.any(m_asy):
            sub[m_asy] = _asymptotic(zb[m_asy], g1, g2)
        out[neg] = sub

    return float(out[0]) if scalar else out


def _series(z: np.ndarray, g1: float, g2: float, max_terms: int = 400) -> np.ndarray:
    """Taylor series with compensated summation.

    Only called where the cancellation guard holds, so the largest term is
    bounded by exp(_SERIES_DIGIT_GUARD) and double precision suffices.
    """
    total = np.full(z.shape, rgamma(g2))
    comp = np.zeros_like(total)
    power = np.ones_like(total)
    peak = float(np.max(np.abs(z))) ** (1.0 / g1) / g1 if z.size else 0.0
    for k in range(1, max_terms + 1):
        power = power * z
        term = power * rgamma(g1 * k + g2)
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        if k > peak and np.all(np.abs(term) <= 1e-17 * (1.0 + np.abs(total))):
            return total
    raise NumericError("Mittag-Leffler series did not converge")


def _contour(zb: np.ndarray, g1: float, g2: float, nodes: int) -> np.ndarray:
    """Trapezoid quadrature of the Laplace inversion on a parabolic contour.

    E(-zb) = (1/2*pi*i) * integral of exp(s) s^(g1-g2) / (s^g1 + zb) ds over
    a Hankel-type path.  The parabola s(u) = mu*(1+iu)^2 stays off the branch
    cut, the integrand decays like exp(mu*(1-u^2)), and conjugate symmetry
    halves the work.  For g1 <= 1 and zb > 0 the denominator has no zeros on
    the principal branch, so the integrand is analytic in a strip around the
    real u-axis and the trapezoid rule converges geometrically.
    """
    mu = _CONTOUR_MU
    # Truncate where exp(Re s) ~ exp(-46).
    umax = np.sqrt(1.0 + 46.0 / mu)
    h = umax / nodes
    u = (np.arange(nodes) + 0.5) * h
    s = mu * (1.0 + 1j * u) ** 2
    ds = 2j * mu * (1.0 + 1j * u)
    w = np.exp(s) * ds * (h / np.pi)
    f = s ** (g1 - g2) / (s**g1 + zb[:, None])
    return np.imag(f @ w)


def _asymptotic(zb: np.ndarray, g1: float, g2: float, max_terms: int = 120) -> np.ndarray:
    """Divergent tail expansion truncated at its smallest term.

    E(z) ~ -sum_{k>=1} z^(-k)/Gamma(g2 - g1*k) as z -> -inf.  Terms whose
    Gamma argument is a non-positive integer vanish identically (rgamma is
    entire).  Per-element accumulation freezes once terms start growing.
    """
    inv = 1.0 / zb
    total = np.zeros_like(zb)
    comp = np.zeros_like(zb)
    power = np.ones_like(zb)
    prev = np.full(zb.shape, np.inf)
    active = np.ones(zb.shape, dtype=bool)
    for k in range(1, max_terms + 1):
        power = power * inv
        rg = float(rgamma(g2 - g1 * k))
        if rg == 0.0:
            continue  # pole term vanishes identically; no size information
        sign = -1.0 if k % 2 else 1.0
        term = -sign * power * rg
        mag = np.abs(term)
        active &= ~(mag > prev)  # freeze at the smallest term, per element
        term = np.where(active, term, 0.0)
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        prev = np.where(active, mag, prev)
        if not np.any(active):
            break
        if np.all(mag[active] <= 1e-18 * (1.0 + np.abs(total[active]))):
            break
    return total


def _exp_family_positive(z: np.ndarray, g2: float, r_switch: float) -> np.ndarray:
    """E(z; 1, g2) for z > 0 via series or the incomplete-gamma closed form.

    For b > 1:  E(z; 1, b) = exp(z) * z^(1-b) * P(b-1, z)  with P the
    regularized lower incomplete gamma; for b <= 1 one index lift
    E(z; 1, b) = z*E(z; 1, b+1) + 1/Gamma(b) reduces to the first case.
    Small arguments use the series (the closed form underflows there).
    """
    out = np.empty_like(z)
    small = z <= max(1.0, min(r_switch, 30.0))
    if np.any(small):
        out[small] = _series(z[small], 1.0, g2)
    big = ~small
    if np.any(big):
        zz = z[big]
        if g2 > 1.0:
            val = np.exp(zz) * zz ** (1.0 - g2) * gammainc(g2 - 1.0, zz)
        else:
            lifted = np.exp(zz) * zz ** (-g2) * gammainc(g2, zz)
            val = zz * lifted + rgamma(g2)
        out[big] = val
    return out


def ml_kernel_integral(alpha: float, lam: float, t):
    """Closed form of the mode response integral.

    integral_0^t s^(alpha-1) E(-lam*s^alpha; alpha, alpha) ds
        = (1 - E(-lam*t^alpha; alpha, 1)) / lam

    Monotone non-decreasing in t with limit 1/lam.  alpha = 1 is the
    classical limit (1 - exp(-lam*t))/lam.
    """
    a = validate_order(alpha, classical=True)
    lam = float(lam)
    if not (np.isfinite(lam) and lam > 0.0):
        raise ParameterError("lam must be positive")
    t_in = np.asarray(t, dtype=float)
    scalar = t_in.ndim == 0
    tf = np.atleast_1d(t_in)
    if np.any(tf < 0.0) or not np.all(np.isfinite(tf)):
        raise ParameterError("t must be finite and non-negative")
    out = (1.0 - mittag_leffler(-lam * tf**a, a, 1.0)) / lam
    return float(out[0]) if scalar else out


def ml_laplace(alpha: float, lam: float, zeta: float) -> float:
    """Laplace transform of t -> E(-lam*t^alpha; alpha, 1) at zeta > 0.

    Equals zeta^(alpha-1) / (zeta^alpha + lam); the rational structure in
    eta = zeta^alpha is what the resolvent-based inversion exploits.
    """
    a = validate_order(alpha, classical=True)
    lam = float(lam)
    zeta = float(zeta)
    if not (np.isfinite(lam) and lam > 0.0):
        raise ParameterError("lam must be positive")
    if not (np.isfinite(zeta) and zeta > 0.0):
        raise ParameterError("zeta must be positive")
    return zeta ** (a - 1.0) / (zeta**a + lam)
