"""Neumann Sturm-Liouville eigenproblem for A_p = -d^2/dx^2 - p(x) on [0,1].

The operator acts with zero-derivative boundary conditions at both ends and
a continuous potential p <= 0, p not identically 0, so its spectrum is a
strictly increasing positive sequence lambda_1 < lambda_2 < ... with
lambda_n of order n^2.  Eigenfunctions are normalized to value 1 at x = 1
(the raw eigenvector cannot vanish there: an eigenfunction with value and
derivative both zero at an endpoint is identically zero), and the norming
constants rho_n are the squared L2 norms after that rescaling.

Discretization is second-order central differences with ghost-point Neumann
closure.  The resulting matrix is symmetric under the trapezoid weights
(1/2, 1, ..., 1, 1/2); conjugating by sqrt of the weights gives a plain
symmetric tridiagonal matrix whose ends carry sqrt(2) off-diagonal factors.
Eigenvalues are Richardson-extrapolated across nested grids; eigenvectors
are taken from the finest grid and restricted to the caller's grid.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import simpson
from scipy.linalg import eigh_tridiagonal, solve_banded

from .errors import DegeneratePotentialError, GridError, NumericError, ParameterError

__all__ = ["Potential", "SpectralData", "eigen_solve", "neumann_steady"]


@dataclass
class Potential:
    """Sampled potential on the uniform grid over [0,1], endpoints included.

    The continuous representation is the piecewise-linear interpolant of the
    samples.  All samples must be <= 0 and not all zero.
    """

    samples: np.ndarray

    def __post_init__(self) -> None:
        self.samples = np.asarray(self.samples, dtype=float)
        if self.samples.ndim != 1 or self.samples.size < 5:
            raise ParameterError("potential needs at least 5 samples on a 1-D grid")
        if not np.all(np.isfinite(self.samples)):
            raise ParameterError("potential contains non-finite values")
        if np.any(self.samples > 0.0):
            raise ParameterError("potential samples must be <= 0")
        if np.max(np.abs(self.samples)) <= 1e-14:
            raise DegeneratePotentialError(
                "potential is identically zero; the lowest eigenvalue would be 0 "
                "and every 1/lambda_n series would diverge"
            )

    @property
    def j_cells(self) -> int:
        return self.samples.size - 1

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.samples.size)

    def __call__(self, x) -> np.ndarray:
        """Piecewise-linear interpolant of the samples."""
        return np.interp(x, self.grid, self.samples)

    @classmethod
    def constant(cls, value: float, j_cells: int = 200) -> "Potential":
        return cls(np.full(j_cells + 1, float(value)))

    @classmethod
    def piecewise(cls, values, j_cells: int = 200) -> "Potential":
        """Piecewise-constant potential on equal subintervals of [0, 1].

        Grid samples on a boundary between pieces take the right piece's
        value, so the realized profile is exact away from one transition
        cell per boundary.
        """
        vals = np.asarray(values, dtype=float)
        if vals.ndim != 1 or vals.size < 1:
            raise ParameterError("piecewise potential needs a 1-D list of piece values")
        x = np.linspace(0.0, 1.0, j_cells + 1)
        idx = np.minimum((x * vals.size).astype(int), vals.size - 1)
        return cls(vals[idx])

    @classmethod
    def from_callable(cls, fn, j_cells: int = 200) -> "Potential":
        x = np.linspace(0.0, 1.0, j_cells + 1)
        return cls(np.asarray([fn(xj) for xj in x], dtype=float))


@dataclass
class SpectralData:
    """Eigen-triples (lambda_n, phi_n, rho_n) of the Neumann operator.

    eigenfunctions[n] is phi_{n+1} sampled on `grid` with phi(1) = 1 exactly;
    norming[n] is rho_{n+1} = ||phi_{n+1}||^2.  Treated as immutable after
    construction.
    """

    lambdas: np.ndarray
    eigenfunctions: np.ndarray
    norming: np.ndarray
    grid: np.ndarray
    tail_shift: float = field(default=0.0)  # mean(-p), for tail estimates

    def __post_init__(self) -> None:
        self.lambdas = np.asarray(self.lambdas, dtype=float)
        self.eigenfunctions = np.asarray(self.eigenfunctions, dtype=float)
        self.norming = np.asarray(self.norming, dtype=float)
        self.grid = np.asarray(self.grid, dtype=float)
        if self.lambdas.ndim != 1 or self.lambdas.size < 1:
            raise ParameterError("need at least one eigenvalue")
        if np.any(self.lambdas <= 0.0):
            raise ParameterError("eigenvalues must be positive")
        if np.any(np.diff(self.lambdas) <= 0.0):
            raise ParameterError("eigenvalues must be strictly increasing")
        if self.eigenfunctions.shape != (self.lambdas.size, self.grid.size):
            raise ParameterError("eigenfunction array shape mismatch")
        if np.any(self.norming <= 0.0):
            raise ParameterError("norming constants must be positive")
        if not np.all(self.eigenfunctions[:, -1] == 1.0):
            raise ParameterError("eigenfunctions must have value exactly 1 at x = 1")

    @property
    def n_modes(self) -> int:
        return self.lambdas.size

    @property
    def weights(self) -> np.ndarray:
        """Kernel weights 1/(lambda_n rho_n)."""
        return 1.0 / (self.lambdas * self.norming)

    def tail_estimate(self, *, horizon: int = 20000) -> float:
        """Estimate sum_{n > N} 1/(lambda_n rho_n) from Weyl asymptotics.

        Uses lambda_n ~ ((n-1)pi)^2 + mean(-p) and rho ~ 1/2 (the asymptotic
        norming constant of boundary-normalized cosines).
        """
        n0 = self.n_modes + 1
        n = np.arange(n0, n0 + horizon, dtype=float)
        lam = ((n - 1.0) * np.pi) ** 2 + self.tail_shift
        partial = float(np.sum(1.0 / lam)) / 0.5
        remainder = 2.0 / (np.pi**2 * (n[-1]))
        return partial + remainder

    def orthogonality_residual(self) -> float:
        """max_{n != m} |<phi_n, phi_m>| / (||phi_n|| ||phi_m||), trapezoid rule."""
        dx = float(self.grid[1] - self.grid[0])
        w = np.ones(self.grid.size)
        w[0] = w[-1] = 0.5
        gram = (self.eigenfunctions * w) @ self.eigenfunctions.T * dx
        norms = np.sqrt(np.diag(gram))
        gram = gram / np.outer(norms, norms)
        np.fill_diagonal(gram, 0.0)
        return float(np.max(np.abs(gram)))

    def to_dict(self) -> dict:
        return {
            "lambdas": self.lambdas.tolist(),
            "norming": self.norming.tolist(),
            "grid": self.grid.tolist(),
            "eigenfunctions": self.eigenfunctions.tolist(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "SpectralData":
        return cls(
            lambdas=np.asarray(d["lambdas"], dtype=float),
            eigenfunctions=np.asarray(d["eigenfunctions"], dtype=float),
            norming=np.asarray(d["norming"], dtype=float),
            grid=np.asarray(d["grid"], dtype=float),
        )


def _tridiag_parts(p_vals: np.ndarray, h: float):
    """Symmetrized tridiagonal of the ghost-point Neumann discretization.

    Raw rows 0 and J have off-diagonal -2/h^2; the operator is self-adjoint
    under trapezoid weights, and conjugation by sqrt(weights) turns both
    end couplings into -sqrt(2)/h^2 while leaving the diagonal unchanged.
    """
    inv_h2 = 1.0 / (h * h)
    diag = 2.0 * inv_h2 - p_vals
    off = np.full(p_vals.size - 1, -inv_h2)
    off[0] *= np.sqrt(2.0)
    off[-1] *= np.sqrt(2.0)
    return diag, off


def _solve_level(p: Potential, j_cells: int, n_modes: int):
    """Eigenpairs of the discretized operator on a grid with j_cells cells."""
    x = np.linspace(0.0, 1.0, j_cells + 1)
    h = 1.0 / j_cells
    diag, off = _tridiag_parts(p(x), h)
    try:
        lam, vec = eigh_tridiagonal(diag, off, select="i", select_range=(0, n_modes - 1))
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK hiccup
        raise NumericError("tridiagonal eigensolve failed") from exc
    # undo the symmetrizing conjugation: phi = v / sqrt(w), w = (1/2,1,...,1,1/2)
    vec = vec.copy()
    vec[0, :] *= np.sqrt(2.0)
    vec[-1, :] *= np.sqrt(2.0)
    return lam, vec, x


def _richardson(levels: list[np.ndarray]) -> np.ndarray:
    """Eliminate h^2 (then h^4) error terms across grid-doubling levels."""
    table = [np.asarray(v, dtype=float) for v in levels]
    order = 2.0
    while len(table) > 1:
        factor = 2.0**order
        table = [
            (factor * table[i + 1] - table[i]) / (factor - 1.0)
            for i in range(len(table) - 1)
        ]
        order += 2.0
    return table[0]


def eigen_solve(p: Potential, n_modes: int, refine: int = 3) -> SpectralData:
    """First n_modes eigen-triples of A_p with Neumann boundary conditions.

    Eigenvalues are Richardson-extrapolated across `refine` grid-doubling
    levels starting from the potential's own grid.  Eigenfunctions come from
    the finest level, are rescaled to phi(1) = 1, and are restricted back to
    the potential grid; norming constants use composite Simpson on the
    finest grid.  The resolution guard n_modes <= J_finest/4 is enforced on
    the finest internal grid.
    """
    n_modes = int(n_modes)
    if n_modes < 1:
        raise ParameterError("n_modes must be >= 1")
    refine = int(refine)
    if not 1 <= refine <= 4:
        raise ParameterError("refine must be between 1 and 4")
    j0 = p.j_cells
    j_finest = j0 * 2 ** (refine - 1)
    if n_modes > j_finest // 4:
        raise GridError(
            f"resolution guard: n_modes={n_modes} needs a finest grid of at "
            f"least {4 * n_modes} cells, got {j_finest}"
        )

    lam_levels = []
    vec, x_fine = None, None
    for lvl in range(refine):
        lam, v, x = _solve_level(p, j0 * 2**lvl, n_modes)
        lam_levels.append(lam)
        vec, x_fine = v, x
    lam_extrap = _richardson(lam_levels)
    if np.any(lam_extrap <= 0.0) or np.any(np.diff(lam_extrap) <= 0.0):
        raise NumericError("extrapolated spectrum is not strictly increasing positive")

    h_fine = x_fine[1] - x_fine[0]
    stride = 2 ** (refine - 1)
    funcs = np.empty((n_modes, j0 + 1))
    norming = np.empty(n_modes)
    for n in range(n_modes):
        phi = vec[:, n]
        # unit continuous L2 norm first, then endpoint rescaling
        phi = phi / np.sqrt(np.trapezoid(phi**2, dx=h_fine))
        end = phi[-1]
        if abs(end) < 1e-3:
            raise NumericError(
                f"eigenfunction {n + 1} nearly vanishes at x=1 (value {end:.2e}); "
                "normalization to phi(1)=1 is ill-posed"
            )
        phi = phi / end
        phi[-1] = 1.0
        norming[n] = simpson(phi**2, dx=h_fine)
        funcs[n] = phi[::stride]
    return SpectralData(
        lambdas=lam_extrap,
        eigenfunctions=funcs,
        norming=norming,
        grid=p.grid.copy(),
        tail_shift=float(np.mean(-p.samples)),
    )


def neumann_steady(p: Potential) -> np.ndarray:
    """Steady profile w with -w'' - p w = 0, w'(0) = 0, w'(1) = 1.

    Equals the kernel's long-time limit sum_n phi_n(x)/(lambda_n rho_n).
    Solved with the same ghost-point discretization on the potential grid
    and one Richardson level (pointwise O(h^4)).  Returns w on p.grid.
    """
    sols = []
    for j_cells in (p.j_cells, 2 * p.j_cells):
        x = np.linspace(0.0, 1.0, j_cells + 1)
        h = 1.0 / j_cells
        inv_h2 = 1.0 / (h * h)
        diag = 2.0 * inv_h2 - p(x)
        lower = np.full(j_cells, -inv_h2)
        upper = np.full(j_cells, -inv_h2)
        upper[0] = -2.0 * inv_h2
        lower[-1] = -2.0 * inv_h2
        rhs = np.zeros(j_cells + 1)
        rhs[-1] = 2.0 / h
        ab = np.zeros((3, j_cells + 1))
        ab[0, 1:] = upper
        ab[1, :] = diag
        ab[2, :-1] = lower
        try:
            w = solve_banded((1, 1), ab, rhs)
        except np.linalg.LinAlgError as exc:
            raise DegeneratePotentialError("steady Neumann system is singular") from exc
        if not np.all(np.isfinite(w)):
            raise NumericError("steady solve produced non-finite values")
        sols.append(w)
    coarse, fine = sols[0], sols[1][::2]
    return (4.0 * fine - coarse) / 3.0
