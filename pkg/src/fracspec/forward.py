"""Spectral forward solver and boundary response kernel.

The field solver expands the solution in Neumann eigen-modes and convolves
each mode's relaxation kernel with the boundary flux.  The response kernel
and its long-time limit come from the same expansion in closed form, so the
two objects can be cross-checked through the convolution identity below.
"""

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .errors import (
    CompatibilityError,
    GridError,
    NumericError,
    ParameterError,
    TruncationWarning,
)
from .fraccalc import Signal, halpha_check
from .mlf import mittag_leffler, ml_kernel_integral
from .sturm import Potential, SpectralData, neumann_steady
from .validation import as_finite_array, validate_order

__all__ = [
    "SolutionField",
    "KernelTable",
    "solve_forward",
    "kernel",
    "verify_duhamel",
    "trace",
]


@dataclass
class SolutionField:
    """Space-time field u(x_j, t_k) on a uniform time grid.

    values[j, k] = u(grid[j], k * dt).  The t = 0 column is identically
    zero: the solution class starts from a zero state and for small orders
    admits no other pointwise initial value, so the stored column is a
    representation choice, not data.
    """

    values: np.ndarray
    grid: np.ndarray
    dt: float
    tail_estimate: float = 0.0

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=float)
        self.grid = np.asarray(self.grid, dtype=float)
        self.dt = float(self.dt)
        if self.values.ndim != 2 or self.values.shape[1] < 2:
            raise ParameterError("field values must be 2-D with at least two time levels")
        if self.grid.ndim != 1 or self.grid.size != self.values.shape[0]:
            raise ParameterError("x-grid length must match the field's first axis")
        if self.dt <= 0.0 or not np.isfinite(self.dt):
            raise ParameterError("dt must be positive and finite")
        if not np.all(np.isfinite(self.values)):
            raise NumericError("field contains non-finite values")
        if np.any(self.values[:, 0] != 0.0):
            raise ParameterError("the t = 0 column must be exactly zero")

    @property
    def j_cells(self) -> int:
        return self.grid.size - 1

    @property
    def m_steps(self) -> int:
        return self.values.shape[1] - 1

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.values.shape[1]) * self.dt

    def to_dict(self) -> dict:
        return {
            "grid": self.grid.tolist(),
            "dt": self.dt,
            "tail_estimate": self.tail_estimate,
            "values": self.values.tolist(),
        }

    def csv_rows(self):
        """Yield (x, t, value) rows in x-major order."""
        times = self.times
        for j in range(self.grid.size):
            x = float(self.grid[j])
            for k in range(times.size):
                yield x, float(times[k]), float(self.values[j, k])


@dataclass
class KernelTable:
    """Boundary response kernel K(x, t) at selected x, with its t -> inf limit."""

    x_locations: np.ndarray
    times: np.ndarray
    values: np.ndarray
    limit: np.ndarray
    tail_estimate: float = 0.0

    def __post_init__(self) -> None:
        self.x_locations = np.asarray(self.x_locations, dtype=float)
        self.times = np.asarray(self.times, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        self.limit = np.asarray(self.limit, dtype=float)
        if self.times.ndim != 1 or self.times.size == 0:
            raise ParameterError("need at least one time")
        if np.any(self.times < 0.0) or np.any(np.diff(self.times) < 0.0):
            raise ParameterError("times must be sorted and nonnegative")
        if self.values.shape != (self.x_locations.size, self.times.size):
            raise ParameterError("kernel value array shape mismatch")
        if self.limit.shape != self.x_locations.shape:
            raise ParameterError("limit vector length must match x-locations")
        if not (np.all(np.isfinite(self.values)) and np.all(np.isfinite(self.limit))):
            raise NumericError("kernel table contains non-finite values")
        if self.times[0] == 0.0 and np.any(self.values[:, 0] != 0.0):
            raise ParameterError("kernel must vanish at t = 0")

    def to_dict(self) -> dict:
        return {
            "x_locations": self.x_locations.tolist(),
            "times": self.times.tolist(),
            "limit": self.limit.tolist(),
            "tail_estimate": self.tail_estimate,
            "values": self.values.tolist(),
        }

    def csv_rows(self):
        """Yield (x, t, K) rows in x-major order."""
        for i in range(self.x_locations.size):
            x = float(self.x_locations[i])
            for k in range(self.times.size):
                yield x, float(self.times[k]), float(self.values[i, k])


def _mode_moments(alpha: float, lam: float, times: np.ndarray):
    """Antiderivatives I0, I1 of the mode kernel kappa and s*kappa.

    kappa(s) = s^(alpha-1) E_{alpha,alpha}(-lam s^alpha), so
    I0(t) = (1 - E_{alpha,1}(-lam t^alpha)) / lam and
    I1(t) = t I0(t) + (t/lam)(E_{alpha,2}(-lam t^alpha) - 1).
    """
    i0 = ml_kernel_integral(alpha, lam, times)
    e2 = mittag_leffler(-lam * times**alpha, alpha, 2.0)
    i1 = times * i0 + times * (e2 - 1.0) / lam
    return i0, i1


def _mode_convolution(alpha: float, lam: float, g: Signal) -> np.ndarray:
    """(kappa * g) on g's grid, exact for piecewise-linear g.

    Per-cell mass a_m and first moment of kappa turn the weakly singular
    convolution into two ordinary discrete convolutions; plain trapezoid
    would drop the singular mass near s = t and miss the accuracy budget.
    """
    times = g.times
    i0, i1 = _mode_moments(alpha, lam, times)
    a = np.diff(i0)
    beta = (times[1:] * a - np.diff(i1)) / g.dt
    out = np.empty(times.size)
    out[0] = 0.0
    m = g.m_steps
    out[1:] = np.convolve(a - beta, g.values)[:m] + np.convolve(beta, g.values[1:])[:m]
    return out


def _tail_gate(spec: SpectralData, tail_tol: float) -> float:
    tail = spec.tail_estimate()
    if tail > tail_tol:
        warnings.warn(
            f"mode truncation tail {tail:.3e} exceeds {tail_tol:.1e}; "
            "increase the mode count for a tighter field",
            TruncationWarning,
            stacklevel=3,
        )
    return tail


def solve_forward(spec: SpectralData, alpha, g: Signal, *, tail_tol: float = 1e-2) -> SolutionField:
    """Eigen-expansion solution of the Neumann-forced fractional diffusion problem.

    u(x_j, t_k) = sum_n phi_n(x_j)/rho_n * (kappa_n * g)(t_k) with each mode
    convolution done by product integration that is exact for piecewise-linear
    flux.  Modes are independent; the sum is the only coupling.
    """
    a = validate_order(alpha, classical=True)
    if not isinstance(spec, SpectralData):
        raise ParameterError("spec must be a SpectralData")
    if not isinstance(g, Signal):
        raise ParameterError("g must be a Signal")
    if a >= 0.5:
        diag = halpha_check(g, a)
        if not diag.passed:
            raise CompatibilityError(
                f"flux is incompatible with order {a:g}: {diag}"
            )
    tail = _tail_gate(spec, tail_tol)
    resp = np.empty((spec.n_modes, g.m_steps + 1))
    for n in range(spec.n_modes):
        resp[n] = _mode_convolution(a, float(spec.lambdas[n]), g)
    u = (spec.eigenfunctions.T / spec.norming) @ resp
    u[:, 0] = 0.0
    return SolutionField(values=u, grid=spec.grid.copy(), dt=g.dt, tail_estimate=tail)


def _grid_indices(grid: np.ndarray, xs: np.ndarray) -> np.ndarray:
    idx = np.empty(xs.size, dtype=int)
    for i, x in enumerate(xs):
        j = int(np.argmin(np.abs(grid - x)))
        if abs(grid[j] - x) > 1e-9:
            raise GridError(f"x-location {x:g} is not a grid point")
        idx[i] = j
    return idx


def kernel(
    spec: SpectralData,
    alpha,
    times,
    x_locations=(0.0, 1.0),
    *,
    potential: Potential | None = None,
    tail_tol: float = 1e-2,
) -> KernelTable:
    """Boundary response kernel K(x, t) = sum_n phi_n(x) I0_n(t) / rho_n.

    The long-time limit is sum_n phi_n(x)/(lambda_n rho_n); when the
    generating potential is passed the limit is taken from the steady
    Neumann profile instead, which is free of mode truncation.
    """
    a = validate_order(alpha, classical=True)
    if not isinstance(spec, SpectralData):
        raise ParameterError("spec must be a SpectralData")
    t = as_finite_array(times, "times")
    if t.ndim != 1 or t.size == 0:
        raise ParameterError("times must be a nonempty 1-D array")
    if np.any(t < 0.0) or np.any(np.diff(t) < 0.0):
        raise ParameterError("times must be sorted and nonnegative")
    xs = as_finite_array(x_locations, "x_locations")
    if xs.ndim != 1 or xs.size == 0:
        raise ParameterError("x_locations must be a nonempty 1-D array")
    idx = _grid_indices(spec.grid, xs)
    tail = _tail_gate(spec, tail_tol)
    i0 = np.empty((spec.n_modes, t.size))
    for n in range(spec.n_modes):
        i0[n] = ml_kernel_integral(a, float(spec.lambdas[n]), t)
    phi_sel = spec.eigenfunctions[:, idx]
    k_vals = (phi_sel / spec.norming[:, None]).T @ i0
    if potential is None:
        limit = spec.weights @ phi_sel
    else:
        if not isinstance(potential, Potential):
            raise ParameterError("potential must be a Potential")
        steady = neumann_steady(potential)
        limit = np.interp(xs, potential.grid, steady)
    return KernelTable(
        x_locations=spec.grid[idx],
        times=t,
        values=k_vals,
        limit=limit,
        tail_estimate=tail,
    )


def _locate(xs: np.ndarray, x: float) -> int:
    j = int(np.argmin(np.abs(xs - x)))
    if abs(xs[j] - x) > 1e-9:
        raise GridError(f"kernel table has no x-location {x:g}")
    return j


def _convolve_with_cusp(kr: np.ndarray, gv: np.ndarray, dt: float) -> np.ndarray:
    """Trapezoid convolution of a sampled kernel with a signal, cusp-corrected.

    The kernel vanishes at t = 0 and typically rises like a*t^beta with
    beta < 1, where plain trapezoid loses an O(dt^(1+beta)) head term.  The
    local power is fitted from the first two kernel samples and the first
    two panels are re-integrated in closed form against the piecewise-linear
    signal; kernels whose head is not power-like are left uncorrected.
    """
    m = gv.size - 1
    full = np.convolve(kr, gv)[: m + 1]
    rhs = dt * (full - 0.5 * kr * gv[0] - 0.5 * kr[0] * gv)
    n_head = 2
    if m < n_head + 1 or kr[1] <= 0.0 or kr[2] <= 0.0:
        return rhs
    beta = np.log2(kr[2] / kr[1])
    if not 0.05 < beta < 2.5:
        return rhs
    a = kr[1] / dt**beta
    j = np.arange(n_head, dtype=float)
    # per-panel moments of a*s^beta against the two linear hat pieces
    c0 = a * dt ** (beta + 1) * ((j + 1) ** (beta + 1) - j ** (beta + 1)) / (beta + 1)
    c1 = a * dt ** (beta + 1) * (
        ((j + 1) ** (beta + 2) - j ** (beta + 2)) / (beta + 2)
        - j * ((j + 1) ** (beta + 1) - j ** (beta + 1)) / (beta + 1)
    )
    taps_exact = np.zeros(n_head + 1)
    taps_exact[:n_head] += c0 - c1
    taps_exact[1:] += c1
    taps_trap = dt * np.concatenate(([0.5 * kr[0]], kr[1:n_head], [0.5 * kr[n_head]]))
    corr = np.convolve(gv, taps_exact - taps_trap)[: m + 1]
    rhs[n_head:] += corr[n_head:]
    return rhs


def verify_duhamel(u: SolutionField, ktab: KernelTable, g: Signal) -> float:
    """Normalized mismatch of the time-integrated field against kernel * flux.

    Checks int_0^xi u(x, t) dt = (K(x, .) * g)(xi) at x in {0, 1}.  The left
    side is composite trapezoid of the field row; the right side is the
    cusp-corrected trapezoid convolution.  Returns the worst
    |lhs - rhs| / (eps + max|lhs|) over the xi-grid and the two endpoints.
    """
    if not isinstance(u, SolutionField) or not isinstance(ktab, KernelTable):
        raise ParameterError("need a SolutionField and a KernelTable")
    if not isinstance(g, Signal):
        raise ParameterError("g must be a Signal")
    m = u.m_steps
    if g.m_steps != m or abs(g.dt - u.dt) > 1e-12 * u.dt:
        raise GridError("flux grid differs from the field grid")
    if ktab.times.size != m + 1 or np.max(np.abs(ktab.times - u.times)) > 1e-9 * u.times[-1]:
        raise GridError("kernel time grid differs from the field grid")
    if abs(u.grid[0]) > 1e-9 or abs(u.grid[-1] - 1.0) > 1e-9:
        raise GridError("field grid must span [0, 1]")
    dt = u.dt
    worst = 0.0
    for x, row in ((0.0, u.values[0]), (1.0, u.values[-1])):
        kr = ktab.values[_locate(ktab.x_locations, x)]
        lhs = cumulative_trapezoid(row, dx=dt, initial=0.0)
        rhs = _convolve_with_cusp(kr, g.values, dt)
        scale = np.finfo(float).eps + float(np.max(np.abs(lhs)))
        worst = max(worst, float(np.max(np.abs(lhs - rhs)) / scale))
    return worst


def trace(u: SolutionField, endpoint) -> Signal:
    """Boundary time series u(endpoint, .) as a Signal."""
    if not isinstance(u, SolutionField):
        raise ParameterError("u must be a SolutionField")
    if endpoint not in (0, 1):
        raise ParameterError("endpoint must be 0 or 1")
    if abs(u.grid[0]) > 1e-9 or abs(u.grid[-1] - 1.0) > 1e-9:
        raise GridError("field grid must span [0, 1]")
    row = u.values[0] if endpoint == 0 else u.values[-1]
    return Signal(values=row.copy(), dt=u.dt)
