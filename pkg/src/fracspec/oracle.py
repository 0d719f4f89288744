"""Finite-difference cross-check solver for the Neumann-forced problem.

Independent of the eigen-expansion path: implicit time stepping with the
L1 memory weights on the left and a ghost-point Laplacian plus potential
term on the right.  Exists so the spectral solver has something to be
wrong against.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded
from scipy.special import rgamma

from .errors import CompatibilityError, NumericError, ParameterError
from .fraccalc import Signal, halpha_check
from .forward import SolutionField
from .sturm import Potential
from .validation import validate_order

__all__ = ["solve_l1", "convergence_study", "ConvergenceReport"]


def solve_l1(p: Potential, alpha, g: Signal, j_cells: int) -> SolutionField:
    """March the fractional diffusion problem with the L1 implicit scheme.

    Memory term: dt^-alpha/Gamma(2-alpha) * [u^k - sum_j (b_{j-1}-b_j) u^{k-j}]
    (the u^0 term drops: the state starts at zero).  Space: second-order
    central Laplacian with ghost points enforcing u_x(0) = 0 and u_x(1) = g.
    Every step solves one tridiagonal system; alpha = 1 is backward Euler.
    """
    a = validate_order(alpha, classical=True)
    if not isinstance(p, Potential):
        raise ParameterError("p must be a Potential")
    if not isinstance(g, Signal):
        raise ParameterError("g must be a Signal")
    j_cells = int(j_cells)
    if j_cells < 4:
        raise ParameterError("need at least 4 space cells")
    if a >= 0.5:
        diag = halpha_check(g, a)
        if not diag.passed:
            raise CompatibilityError(f"flux is incompatible with order {a:g}: {diag}")

    m = g.m_steps
    dt = g.dt
    h = 1.0 / j_cells
    x = np.linspace(0.0, 1.0, j_cells + 1)
    c = dt ** (-a) * float(rgamma(2.0 - a))

    j = np.arange(m, dtype=float)
    jpow = j ** (1.0 - a)
    jpow[0] = 0.0  # 0^0 convention as in the L1 weights: b_0 = 1 at alpha = 1
    b = (j + 1.0) ** (1.0 - a) - jpow
    w = np.empty(m)
    w[0] = 0.0
    w[1:] = b[:-1] - b[1:]  # history weights, positive for alpha < 1

    inv_h2 = 1.0 / (h * h)
    ab = np.zeros((3, j_cells + 1))
    ab[0, 1:] = -inv_h2
    ab[0, 1] = -2.0 * inv_h2
    ab[1, :] = c + 2.0 * inv_h2 - p(x)
    ab[2, :-1] = -inv_h2
    ab[2, -2] = -2.0 * inv_h2

    u = np.zeros((j_cells + 1, m + 1))
    rhs = np.empty(j_cells + 1)
    for k in range(1, m + 1):
        if k == 1:
            hist = 0.0
        else:
            hist = u[:, 1:k] @ w[1:k][::-1]
        rhs[:] = c * hist
        rhs[-1] += 2.0 * g.values[k] / h
        try:
            u[:, k] = solve_banded((1, 1), ab, rhs, check_finite=False)
        except np.linalg.LinAlgError as exc:  # unreachable for p <= 0
            raise NumericError("tridiagonal step failed") from exc
    if not np.all(np.isfinite(u)):
        raise NumericError("time stepping produced non-finite values")
    return SolutionField(values=u, grid=x, dt=dt)


def _resample_time(g: Signal, factor: int) -> Signal:
    """Linear resampling; exact for the piecewise-linear signal class."""
    fine = np.linspace(0.0, g.duration, factor * g.m_steps + 1)
    return Signal(values=np.interp(fine, g.times, g.values), dt=g.dt / factor)


def _l2(v: np.ndarray, dt: float) -> float:
    return float(np.sqrt(np.trapezoid(v * v, dx=dt)))


@dataclass(frozen=True)
class ConvergenceReport:
    """Self-convergence rates of the L1 stepper at x = 1."""

    temporal_errors: np.ndarray
    temporal_orders: np.ndarray
    spatial_errors: np.ndarray
    spatial_orders: np.ndarray

    @property
    def temporal_order(self) -> float:
        return float(self.temporal_orders[-1])

    @property
    def spatial_order(self) -> float:
        return float(self.spatial_orders[-1])

    def __str__(self) -> str:
        return (
            f"temporal order {self.temporal_order:.3f} "
            f"(steps {np.array2string(self.temporal_orders, precision=3)}), "
            f"spatial order {self.spatial_order:.3f} "
            f"(steps {np.array2string(self.spatial_orders, precision=3)})"
        )


def convergence_study(p: Potential, alpha, g: Signal, levels: int) -> ConvergenceReport:
    """Observed orders from nested grid refinements of solve_l1.

    Temporal sweep halves dt at fixed space; spatial sweep doubles the cell
    count at fixed dt.  Errors are L2-in-time gaps between successive traces
    at x = 1 on the shared coarse grid; orders are log2 ratios.  Expect
    roughly min(2-alpha, 1+alpha) in time on benign data and 2 in space.
    """
    a = validate_order(alpha, classical=True)
    levels = int(levels)
    if levels < 3:
        raise ParameterError("need at least 3 levels for a rate estimate")

    j_time = 128  # space fixed and fine enough that time error dominates
    traces = []
    for lev in range(levels):
        gl = _resample_time(g, 2**lev)
        field = solve_l1(p, a, gl, j_time)
        traces.append(field.values[-1, :: 2**lev])
    terr = np.array(
        [_l2(traces[i + 1] - traces[i], g.dt) for i in range(levels - 1)]
    )
    torder = np.log2(terr[:-1] / terr[1:])

    gs = _resample_time(g, 2)  # time fixed and fine so space error dominates
    j0 = 8
    traces = []
    for lev in range(levels):
        field = solve_l1(p, a, gs, j0 * 2**lev)
        traces.append(field.values[-1])
    serr = np.array(
        [_l2(traces[i + 1] - traces[i], gs.dt) for i in range(levels - 1)]
    )
    sorder = np.log2(serr[:-1] / serr[1:])
    if not (np.all(np.isfinite(torder)) and np.all(np.isfinite(sorder))):
        raise NumericError("degenerate refinement differences")
    return ConvergenceReport(
        temporal_errors=terr,
        temporal_orders=torder,
        spatial_errors=serr,
        spatial_orders=sorder,
    )
