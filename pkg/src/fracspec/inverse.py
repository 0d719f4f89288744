"""Identification algorithms driven by boundary kernel data.

Four recovery problems, in increasing depth:

* order of the time derivative, from the algebraic long-time decay of the
  boundary kernel toward its limit;
* the spectral content (lambda_n, 1/(lambda_n rho_n)) of the kernel, by
  nonlinear least squares against the mode-sum form;
* the potential itself, by matching eigenvalues and norming constants of a
  parametrized candidate to target spectral data;
* support splitting of a vanishing convolution, the discrete shadow of the
  Titchmarsh convolution theorem.

Weights here always mean 1/(lambda_n rho_n): the residues of the resolvent
form of the kernel transform, and the increments of K(1, t) toward its
long-time limit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares, minimize_scalar
from sklearn.base import BaseEstimator

from .errors import GridError, NumericError, ParameterError, PoleProximityError
from .fraccalc import Signal
from .mlf import ml_kernel_integral
from .sturm import Potential, SpectralData, eigen_solve
from .validation import as_finite_array, validate_order

__all__ = [
    "ResolventModel",
    "OrderFit",
    "SpectralFit",
    "PotentialFit",
    "SupportSplit",
    "TitchmarshReport",
    "estimate_order",
    "resolvent_eval",
    "residue_at",
    "extract_spectral",
    "recover_potential",
    "support_infimum",
    "titchmarsh_check",
    "OrderEstimator",
    "SpectralFitter",
    "PotentialEstimator",
]


@dataclass(frozen=True)
class ResolventModel:
    """Finite pole/weight model: poles at -lambda_n with residues weight_n.

    Represents both the resolvent sum R(eta) = sum_n w_n / (eta + lambda_n)
    and the boundary kernel K(1, t) = sum_n w_n (1 - E_alpha(-lambda_n t^alpha))
    built from the same terms.  An empty model is the degenerate carrier for
    identically-zero data.
    """

    terms: tuple = ()

    def __post_init__(self) -> None:
        clean = tuple((float(lam), float(w)) for lam, w in self.terms)
        lams = np.asarray([t[0] for t in clean])
        ws = np.asarray([t[1] for t in clean])
        if clean:
            if not np.all(np.isfinite(lams)) or not np.all(np.isfinite(ws)):
                raise ParameterError("model terms contain non-finite values")
            if np.any(lams <= 0.0):
                raise ParameterError("pole locations lambda_n must be positive")
            if np.any(np.diff(lams) <= 0.0):
                raise ParameterError("pole locations must be strictly increasing")
            if np.any(ws <= 0.0):
                raise ParameterError("weights must be positive")
        object.__setattr__(self, "terms", clean)

    @property
    def count(self) -> int:
        return len(self.terms)

    @property
    def lambdas(self) -> np.ndarray:
        return np.asarray([t[0] for t in self.terms])

    @property
    def weights(self) -> np.ndarray:
        return np.asarray([t[1] for t in self.terms])

    @property
    def total_weight(self) -> float:
        """Long-time kernel limit K(1, infinity) = sum of weights."""
        return float(sum(t[1] for t in self.terms))

    def kernel_values(self, alpha, times) -> np.ndarray:
        """K(1, t) = sum_n w_n (1 - E_{alpha,1}(-lambda_n t^alpha))."""
        a = validate_order(alpha, classical=True)
        t = as_finite_array(times, "times")
        out = np.zeros_like(t, dtype=float)
        for lam, w in self.terms:
            out += w * lam * ml_kernel_integral(a, lam, t)
        return out

    @classmethod
    def from_spectral(cls, spec: SpectralData) -> "ResolventModel":
        return cls(tuple(zip(spec.lambdas, spec.weights)))

    def to_dict(self) -> dict:
        return {"lambdas": self.lambdas.tolist(), "weights": self.weights.tolist()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "ResolventModel":
        return cls(tuple(zip(d["lambdas"], d["weights"])))


# ---------------------------------------------------------------------------
# order recovery


@dataclass(frozen=True)
class OrderFit:
    """Result of the log-log decay fit of the kernel deficit.

    alpha is minus the fitted slope of log(limit - K) against log t;
    intercept is the fitted log-amplitude, whose exponential should match
    sum_n w_n / (Gamma(1-alpha) lambda_n) for clean data.
    """

    alpha: float
    intercept: float
    limit: float
    residual: float
    n_points: int
    window: tuple
    refined: bool = False

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "intercept": self.intercept,
            "limit": self.limit,
            "residual": self.residual,
            "n_points": self.n_points,
            "window": list(self.window),
            "refined": self.refined,
        }


def _aitken_limit(values: np.ndarray) -> float:
    """Accelerated limit from the last three samples of a geometric-ish tail."""
    v0, v1, v2 = values[-3], values[-2], values[-1]
    d1, d2 = v2 - v1, (v2 - v1) - (v1 - v0)
    if d2 == 0.0:
        if d1 == 0.0:
            return float(v2)
        raise NumericError("tail is drifting linearly; cannot accelerate a limit")
    return float(v2 - d1 * d1 / d2)


def estimate_order(times, values=None, *, limit=None, window=0.5, min_points=4, refine=False) -> OrderFit:
    """Recover the fractional order from the long-time kernel deficit.

    The deficit limit - K(1, t) decays like t^(-alpha) once lambda_1 t^alpha
    is large, so a least-squares line through (log t, log deficit) over a
    trailing window has slope -alpha.  Sampling should be log-spaced and
    reach well into the decay; a uniform Signal is accepted but needs a long
    horizon.  With limit omitted it is accelerated out of the last three
    samples.  refine=True follows the slope fit with a bounded 1-D
    minimization of the linear-space misfit of c * t^(-alpha).
    """
    if isinstance(times, Signal):
        if values is not None:
            raise ParameterError("pass either a Signal or two arrays, not both")
        values = times.values
        times = times.times
    t = as_finite_array(times, "times")
    v = as_finite_array(values, "values")
    if t.ndim != 1 or t.shape != v.shape or t.size < min_points + 2:
        raise ParameterError("times and values must be matching 1-D arrays with enough samples")
    if np.any(np.diff(t) <= 0.0):
        raise ParameterError("times must be strictly increasing")
    if not 0.0 < window <= 1.0:
        raise ParameterError("window must be a fraction in (0, 1]")

    lim = _aitken_limit(v) if limit is None else float(limit)
    deficit = lim - v
    start = int(np.floor(t.size * (1.0 - window)))
    sel = np.arange(start, t.size)
    sel = sel[(deficit[sel] > 0.0) & (t[sel] > 0.0)]
    if sel.size < min_points:
        raise NumericError(
            f"only {sel.size} positive deficit samples in the fit window; "
            "data does not resolve the decay toward the limit"
        )
    lt = np.log(t[sel])
    ld = np.log(deficit[sel])
    coef, res, *_ = np.linalg.lstsq(np.column_stack([lt, np.ones_like(lt)]), ld, rcond=None)
    slope, intercept = float(coef[0]), float(coef[1])
    alpha = -slope
    if alpha <= 1e-6:
        raise NumericError("deficit does not decay over the window; no order to recover")
    rms = float(np.sqrt(res[0] / sel.size)) if res.size else 0.0
    fit = OrderFit(
        alpha=alpha,
        intercept=intercept,
        limit=lim,
        residual=rms,
        n_points=int(sel.size),
        window=(float(t[sel[0]]), float(t[sel[-1]])),
    )
    if not refine:
        return fit

    d, ts = deficit[sel], t[sel]

    def misfit(a: float) -> float:
        basis = ts**-a
        c = float(basis @ d) / float(basis @ basis)
        return float(np.sum((d - c * basis) ** 2))

    opt = minimize_scalar(misfit, bounds=(0.01, 0.999), method="bounded", options={"xatol": 1e-7})
    a_ref = float(opt.x)
    basis = ts**-a_ref
    c = float(basis @ d) / float(basis @ basis)
    return OrderFit(
        alpha=a_ref,
        intercept=float(np.log(c)) if c > 0 else intercept,
        limit=lim,
        residual=float(np.sqrt(opt.fun / sel.size)),
        n_points=int(sel.size),
        window=fit.window,
        refined=True,
    )


# ---------------------------------------------------------------------------
# resolvent evaluation and residues


def resolvent_eval(model: ResolventModel, eta):
    """Evaluate R(eta) = sum_n w_n / (eta + lambda_n) off the poles."""
    if not isinstance(model, ResolventModel):
        raise ParameterError("model must be a ResolventModel")
    e = np.asarray(eta)
    if model.count == 0:
        return np.zeros_like(e, dtype=float) if e.ndim else 0.0
    lams = model.lambdas
    dist = np.abs(e[..., None] + lams)
    if np.any(dist < 1e-9):
        raise PoleProximityError("eta is within 1e-9 of a resolvent pole")
    val = (model.weights / (e[..., None] + lams)).sum(axis=-1)
    return val if e.ndim else val[()]


def residue_at(model: ResolventModel, m=None, *, center=None, radius=None, nodes=256) -> float:
    """Residue of the resolvent by trapezoidal contour quadrature on a circle.

    With a 1-based term index m the circle is centered on the pole -lambda_m
    and the residue equals weight_m; with an explicit center the integral
    reports whatever the circle encloses (zero when no pole).  Periodic
    trapezoid on the circle converges spectrally, so modest node counts
    reach 1e-10 accuracy.
    """
    if not isinstance(model, ResolventModel):
        raise ParameterError("model must be a ResolventModel")
    if nodes < 8:
        raise ParameterError("need at least 8 quadrature nodes")
    lams = model.lambdas
    if m is not None:
        if center is not None:
            raise ParameterError("pass either a term index or an explicit center, not both")
        if not 1 <= m <= model.count:
            raise ParameterError(f"term index {m} outside 1..{model.count}")
        c = -lams[m - 1]
        if radius is None:
            gaps = []
            if m > 1:
                gaps.append(lams[m - 1] - lams[m - 2])
            if m < model.count:
                gaps.append(lams[m] - lams[m - 1])
            radius = 0.45 * min(gaps) if gaps else 0.5 * lams[m - 1]
    else:
        if center is None:
            raise ParameterError("need a term index or an explicit center")
        c = complex(center)
    r = float(radius) if radius is not None else None
    if r is None or not (np.isfinite(r) and r > 0.0):
        raise ParameterError("radius must be positive and finite")
    enclosed_other = np.abs(c + lams) <= r + 1e-12
    if m is not None:
        enclosed_other[m - 1] = False
    if np.any(enclosed_other) and m is not None:
        raise ParameterError("circle overlaps a neighboring pole; shrink the radius")
    theta = 2.0 * np.pi * np.arange(nodes) / nodes
    ring = np.exp(1j * theta)
    vals = resolvent_eval(model, c + r * ring)
    return float(np.real(r / nodes * np.sum(vals * ring)))


# ---------------------------------------------------------------------------
# spectral extraction


@dataclass(frozen=True)
class SpectralFit:
    """Fitted pole/weight model with identifiability diagnostics.

    residual is the root-mean-square misfit relative to the data's sup norm;
    conditioning is the singular-value ratio of the final least-squares
    Jacobian (large values mean the pole locations are nearly collapsed and
    the split between modes is not trustworthy).
    """

    model: ResolventModel
    degenerate: bool
    residual: float
    conditioning: float
    retries: int
    n_requested: int

    def to_dict(self) -> dict:
        return {
            "model": self.model.to_dict(),
            "degenerate": self.degenerate,
            "residual": self.residual,
            "conditioning": self.conditioning,
            "retries": self.retries,
            "n_requested": self.n_requested,
        }


def _fit_once(t, v, a, n, init_lambdas, init_weights, max_nfev):
    if init_lambdas is None:
        lam0 = (np.arange(n) * np.pi) ** 2 + 1.0
    else:
        lam0 = np.asarray(init_lambdas, dtype=float)[:n]
        if lam0.size != n or np.any(np.diff(lam0) <= 0) or np.any(lam0 <= 0):
            raise ParameterError("init_lambdas must be strictly increasing positive, length >= n_modes")
    if init_weights is None:
        total = max(float(v[-1]), 1e-12)
        share = (1.0 / lam0) / np.sum(1.0 / lam0)
        w0 = total * share
    else:
        w0 = np.asarray(init_weights, dtype=float)[:n]
        if w0.size != n or np.any(w0 <= 0):
            raise ParameterError("init_weights must be positive, length >= n_modes")
    theta0 = np.concatenate([np.log(np.diff(lam0, prepend=0.0)), np.log(w0)])

    def unpack(theta):
        lam = np.cumsum(np.exp(theta[:n]))
        w = np.exp(theta[n:])
        return lam, w

    def resid(theta):
        lam, w = unpack(theta)
        model = np.zeros_like(t)
        for i in range(n):
            model += w[i] * lam[i] * ml_kernel_integral(a, float(lam[i]), t)
        return model - v

    sol = least_squares(resid, theta0, method="trf", x_scale="jac", max_nfev=max_nfev)
    lam, w = unpack(sol.x)
    sv = np.linalg.svd(sol.jac, compute_uv=False)
    cond = float(sv[0] / sv[-1]) if sv[-1] > 0 else float("inf")
    rms = float(np.sqrt(np.mean(sol.fun**2))) / max(float(np.max(np.abs(v))), 1e-300)
    return lam, w, rms, cond


def extract_spectral(
    times,
    values=None,
    *,
    alpha,
    n_modes,
    init_lambdas=None,
    init_weights=None,
    max_nfev=400,
    collapse_ratio=1.02,
) -> SpectralFit:
    """Fit K(1, t) data by a sum of modes w_n (1 - E_alpha(-lambda_n t^alpha)).

    Positivity and ordering of the fitted poles are built into the
    parametrization (log-increments for lambda, log for weights).  Sampling
    should cover the transient densely and reach the flat tail.  If adjacent
    fitted poles collapse within collapse_ratio the fit retries with one
    mode fewer; identically-zero data short-circuits to an empty degenerate
    model.
    """
    if isinstance(times, Signal):
        if values is not None:
            raise ParameterError("pass either a Signal or two arrays, not both")
        values = times.values
        times = times.times
    t = as_finite_array(times, "times")
    v = as_finite_array(values, "values")
    a = validate_order(alpha, classical=True)
    n = int(n_modes)
    if t.ndim != 1 or t.shape != v.shape:
        raise ParameterError("times and values must be matching 1-D arrays")
    if np.any(t < 0.0) or np.any(np.diff(t) <= 0.0):
        raise ParameterError("times must be nonnegative and strictly increasing")
    if n < 1:
        raise ParameterError("n_modes must be at least 1")
    if np.max(np.abs(v)) <= 1e-14:
        return SpectralFit(ResolventModel(), True, 0.0, float("inf"), 0, n)
    if t.size < 4 * n:
        raise ParameterError("need at least 4 samples per requested mode")

    retries = 0
    while n >= 1:
        lam, w, rms, cond = _fit_once(t, v, a, n, init_lambdas, init_weights, max_nfev)
        collapsed = n > 1 and bool(np.any(lam[1:] / lam[:-1] < collapse_ratio))
        if not collapsed:
            model = ResolventModel(tuple(zip(lam, w)))
            return SpectralFit(model, False, rms, cond, retries, int(n_modes))
        n -= 1
        retries += 1
    return SpectralFit(ResolventModel(), True, float("inf"), float("inf"), retries, int(n_modes))


# ---------------------------------------------------------------------------
# potential recovery


@dataclass(frozen=True)
class PotentialFit:
    """Best recovered potential with the accepted-objective history."""

    potential: Potential
    coefficients: np.ndarray
    objective: float
    history: tuple
    converged: bool
    message: str

    def to_dict(self) -> dict:
        return {
            "samples": self.potential.samples.tolist(),
            "coefficients": np.asarray(self.coefficients).tolist(),
            "objective": self.objective,
            "history": list(self.history),
            "converged": self.converged,
            "message": self.message,
        }


def _realize(theta: np.ndarray, basis: str, j_cells: int) -> Potential:
    """Candidate potential from coefficients, projected onto p <= 0."""
    if basis == "piecewise":
        x = np.linspace(0.0, 1.0, j_cells + 1)
        idx = np.minimum((x * theta.size).astype(int), theta.size - 1)
        samples = theta[idx]
    elif basis == "polynomial":
        x = np.linspace(0.0, 1.0, j_cells + 1)
        samples = np.polynomial.polynomial.polyval(x, theta)
    else:
        raise ParameterError("basis must be 'piecewise' or 'polynomial'")
    return Potential(np.minimum(samples, 0.0))


def _target_pairs(target):
    if isinstance(target, SpectralData):
        return target.lambdas.copy(), target.norming.copy()
    if isinstance(target, ResolventModel):
        if target.count == 0:
            raise ParameterError("empty model carries no spectral targets")
        return target.lambdas, 1.0 / (target.lambdas * target.weights)
    lam, rho = target
    lam = as_finite_array(lam, "target lambdas")
    rho = as_finite_array(rho, "target norming")
    if lam.shape != rho.shape or lam.ndim != 1:
        raise ParameterError("target lambdas and norming must be matching 1-D arrays")
    return lam, rho


def recover_potential(
    target,
    *,
    basis="piecewise",
    dim=2,
    reg=0.0,
    j_cells=200,
    refine=3,
    max_iter=60,
    tol=1e-10,
    x0=None,
) -> PotentialFit:
    """Reconstruct the potential by matching eigenvalues and norming constants.

    Minimizes the summed squared relative mismatch of (lambda_n, rho_n)
    between the candidate and the target, plus reg * ||diff(coefficients)||^2,
    by Gauss-Newton with a forward-difference Jacobian and backtracking.
    Every recorded history entry is an accepted (strictly non-increasing)
    objective value.  The sign constraint p <= 0 is enforced by projecting
    the realized samples, so the optimizer cannot wander out of the
    admissible class.  Non-convergence returns the best iterate flagged
    rather than raising.
    """
    lam_t, rho_t = _target_pairs(target)
    n_pairs = lam_t.size
    if n_pairs < 2:
        raise ParameterError("need at least 2 target eigenpairs")
    dim = int(dim)
    if dim < 1 or dim > 2 * n_pairs:
        raise ParameterError("basis dimension must be between 1 and twice the pair count")
    if reg < 0.0:
        raise ParameterError("reg must be nonnegative")
    theta = np.full(dim, -1.0) if x0 is None else np.asarray(x0, dtype=float).copy()
    if theta.shape != (dim,):
        raise ParameterError("x0 must have shape (dim,)")

    sreg = np.sqrt(reg)

    def residual(th: np.ndarray) -> np.ndarray:
        pot = _realize(th, basis, j_cells)
        spec = eigen_solve(pot, n_pairs, refine=refine)
        parts = [(spec.lambdas - lam_t) / lam_t, (spec.norming - rho_t) / rho_t]
        if reg > 0.0 and dim > 1:
            parts.append(sreg * np.diff(th))
        return np.concatenate(parts)

    def objective(th: np.ndarray) -> float:
        return float(np.sum(residual(th) ** 2))

    try:
        r = residual(theta)
    except ParameterError as exc:
        raise ParameterError(f"initial coefficients are inadmissible: {exc}") from exc
    obj = float(np.sum(r**2))
    history = [obj]
    message = "max_iter reached"
    for _ in range(max_iter):
        if obj <= tol:
            message = "objective below tolerance"
            break
        m = r.size
        jac = np.empty((m, dim))
        for i in range(dim):
            h = 1e-6 * (1.0 + abs(theta[i]))
            th = theta.copy()
            th[i] += h
            jac[:, i] = (residual(th) - r) / h
        jtj = jac.T @ jac
        step = np.linalg.solve(jtj + 1e-12 * np.trace(jtj) / dim * np.eye(dim), -jac.T @ r)
        scale = 1.0
        accepted = False
        while scale > 1e-8:
            cand = theta + scale * step
            try:
                r_new = residual(cand)
            except ParameterError:
                scale *= 0.5  # candidate fell out of the admissible class
                continue
            obj_new = float(np.sum(r_new**2))
            if obj_new < obj:
                theta, r, obj = cand, r_new, obj_new
                history.append(obj)
                accepted = True
                break
            scale *= 0.5
        if not accepted:
            message = "stagnated: no descent along the Gauss-Newton direction"
            break
    else:
        if obj <= tol:
            message = "objective below tolerance"
    converged = obj <= tol
    return PotentialFit(
        potential=_realize(theta, basis, j_cells),
        coefficients=theta,
        objective=obj,
        history=tuple(history),
        converged=converged,
        message=message if not converged else "objective below tolerance",
    )


# ---------------------------------------------------------------------------
# support splitting


@dataclass(frozen=True)
class SupportSplit:
    """Support infima (t1 for the kernel factor, t2 for the input factor)."""

    t1: float
    t2: float
    threshold: float

    def __post_init__(self) -> None:
        for name in ("t1", "t2", "threshold"):
            val = getattr(self, name)
            if not (np.isfinite(val) and val >= 0.0):
                raise ParameterError(f"{name} must be finite and nonnegative")

    def to_dict(self) -> dict:
        return {"t1": self.t1, "t2": self.t2, "threshold": self.threshold}


def support_infimum(h: Signal, threshold: float) -> float:
    """First grid time where |h| persistently exceeds threshold * sup|h|.

    Persistently means two consecutive samples above the level, which makes
    single-sample noise spikes invisible.  Returns the signal duration when
    the level is never reached (in particular for h identically 0).
    """
    if not isinstance(h, Signal):
        raise ParameterError("h must be a Signal")
    thr = float(threshold)
    if not (np.isfinite(thr) and thr > 0.0):
        raise ParameterError("threshold must be positive")
    amax = float(np.max(np.abs(h.values)))
    if amax == 0.0:
        return h.duration
    exceed = np.abs(h.values) > thr * amax
    pair = exceed[:-1] & exceed[1:]
    hits = np.flatnonzero(pair)
    if hits.size == 0:
        return h.duration
    return float(hits[0] * h.dt)


@dataclass(frozen=True)
class TitchmarshReport:
    """Verdict on a convolution: vanishing (with support split) or not."""

    split: SupportSplit
    verdict: str
    convolution_sup: float
    consistent: bool | None

    def to_dict(self) -> dict:
        return {
            "split": self.split.to_dict(),
            "verdict": self.verdict,
            "convolution_sup": self.convolution_sup,
            "consistent": self.consistent,
        }


def titchmarsh_check(k: Signal, g: Signal, conv_tol: float = 1e-8, *, support_threshold: float = 1e-8) -> TitchmarshReport:
    """Test whether k * g vanishes on [0, T] and split the supports if so.

    The convolution is computed by trapezoid quadrature on the shared grid.
    When its sup norm is below conv_tol * sup|k| * sup|g| the verdict is
    "vanishing" and the support infima must satisfy t1 + t2 >= T - 2 dt
    (reported in `consistent`); otherwise the verdict is "non-vanishing"
    and `consistent` is None.
    """
    if not isinstance(k, Signal) or not isinstance(g, Signal):
        raise ParameterError("k and g must be Signals")
    if k.values.size != g.values.size or abs(k.dt - g.dt) > 1e-12 * max(k.dt, g.dt):
        raise GridError("k and g must share one time grid")
    n = k.values.size
    kv, gv = k.values, g.values
    conv = k.dt * (np.convolve(kv, gv)[:n] - 0.5 * kv * gv[0] - 0.5 * kv[0] * gv)
    conv_sup = float(np.max(np.abs(conv)))
    scale = float(np.max(np.abs(kv)) * np.max(np.abs(gv)))
    t1 = support_infimum(k, support_threshold)
    t2 = support_infimum(g, support_threshold)
    split = SupportSplit(t1=t1, t2=t2, threshold=support_threshold)
    if conv_sup <= conv_tol * scale:
        consistent = t1 + t2 >= k.duration - 2.0 * k.dt - 1e-12
        return TitchmarshReport(split, "vanishing", conv_sup, consistent)
    return TitchmarshReport(split, "non-vanishing", conv_sup, None)


# ---------------------------------------------------------------------------
# estimator front ends


class OrderEstimator(BaseEstimator):
    """Estimator wrapper around estimate_order.

    fit expects X with two columns (t, K(1, t)); the recovered order lands
    in alpha_ and the full diagnostics in fit_.
    """

    def __init__(self, limit=None, window=0.5, min_points=4, refine=False):
        self.limit = limit
        self.window = window
        self.min_points = min_points
        self.refine = refine

    def fit(self, X, y=None):
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != 2:
            raise ParameterError("X must have two columns: times and kernel values")
        result = estimate_order(
            X[:, 0],
            X[:, 1],
            limit=self.limit,
            window=self.window,
            min_points=self.min_points,
            refine=self.refine,
        )
        self.alpha_ = result.alpha
        self.fit_ = result
        return self


class SpectralFitter(BaseEstimator):
    """Estimator wrapper around extract_spectral.

    fit expects X with two columns (t, K(1, t)); the fitted pole/weight
    model lands in model_, the diagnostics in fit_.
    """

    def __init__(self, alpha=0.5, n_modes=2, init_lambdas=None, init_weights=None, max_nfev=400):
        self.alpha = alpha
        self.n_modes = n_modes
        self.init_lambdas = init_lambdas
        self.init_weights = init_weights
        self.max_nfev = max_nfev

    def fit(self, X, y=None):
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != 2:
            raise ParameterError("X must have two columns: times and kernel values")
        result = extract_spectral(
            X[:, 0],
            X[:, 1],
            alpha=self.alpha,
            n_modes=self.n_modes,
            init_lambdas=self.init_lambdas,
            init_weights=self.init_weights,
            max_nfev=self.max_nfev,
        )
        self.model_ = result.model
        self.fit_ = result
        self.degenerate_ = result.degenerate
        return self


class PotentialEstimator(BaseEstimator):
    """Estimator wrapper around recover_potential.

    fit expects X with two columns (lambda_n, rho_n); the recovered
    potential lands in potential_, the fit report in fit_.
    """

    def __init__(self, basis="piecewise", dim=2, reg=0.0, j_cells=200, refine=3, max_iter=60, tol=1e-10):
        self.basis = basis
        self.dim = dim
        self.reg = reg
        self.j_cells = j_cells
        self.refine = refine
        self.max_iter = max_iter
        self.tol = tol

    def fit(self, X, y=None):
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != 2:
            raise ParameterError("X must have two columns: eigenvalues and norming constants")
        result = recover_potential(
            (X[:, 0], X[:, 1]),
            basis=self.basis,
            dim=self.dim,
            reg=self.reg,
            j_cells=self.j_cells,
            refine=self.refine,
            max_iter=self.max_iter,
            tol=self.tol,
        )
        self.potential_ = result.potential
        self.fit_ = result
        self.converged_ = result.converged
        return self
