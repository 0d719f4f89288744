"""Configuration-driven command line front end.

    fracspec <command> --config path [--out dir] [--seed n] [--override key=value]

Commands: solve, kernel, mlf-table, invert-order, invert-spectral,
invert-potential, experiment.  One JSON document describes the run; repeated
--override flags patch scalar fields by dotted path (problem.alpha=0.4)
before validation, so a config file plus its overrides is the complete,
reproducible record of what ran.

Every run writes into the output directory atomically (temp file + rename):
result CSVs with versioned headers, a human-readable summary.txt, and a
manifest.json holding the config digest, package and dependency versions,
wall-clock timings, and the size and sha256 of every artifact.  CSV bodies
are deterministic for a fixed config and seed; timings live only in the
manifest so the data files stay byte-reproducible.

CSV schemas (17 significant digits everywhere):
    trace     t,value
    field     x,t,value
    kernel    x,t,K
    spectra   n,lambda,rho
    potential x,value
    mlf       z,value
    deficit   t,value
    matching  n,lambda_diff,rho_diff

Exit codes: 0 success; 2 config parse or validation error; 3 violated
mathematical hypothesis (zero input, degenerate potential, incompatible
signal); 4 numeric failure.  Nonzero exits print one machine-readable JSON
object to stderr: {"error": {"code", "type", "message", "field"?}}.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
import time

import numpy as np

from . import __version__
from .errors import (
    CompatibilityError,
    DegeneratePotentialError,
    FracspecError,
    GridError,
    HypothesisViolation,
    NumericError,
    ParameterError,
    PoleProximityError,
)
from .forward import kernel as forward_kernel
from .forward import solve_forward, trace
from .fraccalc import Signal
from .harness import distinguishability, eigenvalue_matching, unique_continuation
from .inverse import ResolventModel, estimate_order, extract_spectral, recover_potential
from .mlf import mittag_leffler
from .sturm import Potential, eigen_solve

__all__ = ["main"]

_COMMANDS = (
    "solve",
    "kernel",
    "mlf-table",
    "invert-order",
    "invert-spectral",
    "invert-potential",
    "experiment",
)


class ConfigError(ParameterError):
    """Config field missing or invalid; carries the dotted field path."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


# ---------------------------------------------------------------------------
# config access


def _walk(cfg: dict, path: str):
    node = cfg
    for part in path.split("."):
        if not isinstance(node, dict) or part not in node:
            raise KeyError(path)
        node = node[part]
    return node


def _get(cfg: dict, path: str, kind, default=KeyError, *, minimum=None):
    """Typed config lookup; missing fields fall back or raise with the path."""
    try:
        value = _walk(cfg, path)
    except KeyError:
        if default is KeyError:
            raise ConfigError(path, "required field is missing") from None
        return default
    if kind is float and isinstance(value, (int, float)) and not isinstance(value, bool):
        value = float(value)
    if kind is int and isinstance(value, float) and value.is_integer():
        value = int(value)
    if not isinstance(value, kind) or isinstance(value, bool) and kind is not bool:
        raise ConfigError(path, f"expected {kind.__name__}, got {type(value).__name__}")
    if minimum is not None and value < minimum:
        raise ConfigError(path, f"must be at least {minimum}, got {value}")
    return value


def _apply_override(cfg: dict, spec: str) -> None:
    key, sep, raw = spec.partition("=")
    if not sep or not key:
        raise ConfigError("--override", f"expected key=value, got {spec!r}")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    if isinstance(value, (dict, list)):
        raise ConfigError(key, "overrides may only set scalar fields")
    node = cfg
    parts = key.split(".")
    for part in parts[:-1]:
        node = node.setdefault(part, {})
        if not isinstance(node, dict):
            raise ConfigError(key, "path runs through a non-object field")
    leaf = parts[-1]
    if isinstance(node.get(leaf), (dict, list)):
        raise ConfigError(key, "overrides may only replace scalar fields")
    node[leaf] = value


# ---------------------------------------------------------------------------
# problem-block builders


def _resolve_path(base_dir: str, path: str) -> str:
    return path if os.path.isabs(path) else os.path.join(base_dir, path)


def _read_table(path: str, field: str) -> np.ndarray:
    """Two-column numeric CSV; comment lines and one header row tolerated."""
    try:
        rows = []
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                cells = line.split(",")
                try:
                    rows.append([float(c) for c in cells])
                except ValueError:
                    if rows:
                        raise ConfigError(field, f"non-numeric row in {path}: {line!r}") from None
                    continue  # header row
    except OSError as exc:
        raise ConfigError(field, f"cannot read {path}: {exc}") from exc
    if not rows:
        raise ConfigError(field, f"no numeric rows in {path}")
    arr = np.asarray(rows, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ConfigError(field, f"{path} must have exactly two columns")
    return arr


def _build_potential(cfg: dict, base_dir: str, field: str = "problem.potential") -> Potential:
    spec = _get(cfg, field, dict)
    kind = _get({"_": spec}, "_.kind", str)
    j_cells = _get({"_": spec}, "_.j_cells", int, _get(cfg, "problem.J", int, 200), minimum=4)
    if kind == "constant":
        return Potential.constant(_get({"_": spec}, "_.value", float), j_cells)
    if kind == "piecewise":
        values = _get({"_": spec}, "_.values", list)
        return Potential.piecewise(np.asarray(values, dtype=float), j_cells)
    if kind == "samples-file":
        path = _resolve_path(base_dir, _get({"_": spec}, "_.path", str))
        table = _read_table(path, field)
        x, vals = table[:, 0], table[:, 1]
        expected = np.linspace(0.0, 1.0, x.size)
        if np.max(np.abs(x - expected)) > 1e-9:
            raise ConfigError(field, f"{path} must sample a uniform grid on [0, 1]")
        return Potential(vals)
    raise ConfigError(f"{field}.kind", f"unknown potential kind {kind!r}")


def _build_signal(cfg: dict, base_dir: str) -> Signal:
    spec = _get(cfg, "problem.g", dict)
    kind = _get({"_": spec}, "_.kind", str)
    T = _get(cfg, "problem.T", float, 1.0)
    m_steps = _get(cfg, "problem.M", int, 400, minimum=2)
    if T <= 0.0:
        raise ConfigError("problem.T", "horizon must be positive")
    scale = _get({"_": spec}, "_.scale", float, 1.0)
    if kind == "power":
        expo = _get({"_": spec}, "_.exponent", float, 2.0)
        if expo <= 0.0:
            raise ConfigError("problem.g.exponent", "exponent must be positive so g(0) = 0")
        return Signal.from_callable(lambda t: scale * t**expo, T, m_steps)
    if kind == "ramp":
        start = _get({"_": spec}, "_.start", float, 0.0)
        if not 0.0 <= start < T:
            raise ConfigError("problem.g.start", "ramp start must lie in [0, T)")
        return Signal.from_callable(lambda t: scale * max(0.0, t - start), T, m_steps)
    if kind == "samples-file":
        path = _resolve_path(base_dir, _get({"_": spec}, "_.path", str))
        table = _read_table(path, "problem.g")
        t, vals = table[:, 0], table[:, 1]
        if t.size < 2:
            raise ConfigError("problem.g", f"{path} needs at least two samples")
        dt = t[1] - t[0]
        if dt <= 0.0 or np.max(np.abs(np.diff(t) - dt)) > 1e-9 * max(dt, 1.0):
            raise ConfigError("problem.g", f"{path} must sample a uniform time grid")
        return Signal(scale * vals, float(dt))
    raise ConfigError("problem.g.kind", f"unknown input kind {kind!r}")


def _build_times(cfg: dict, field: str, default_kind: str, g: Signal | None, defaults: dict) -> np.ndarray:
    spec = _get(cfg, field, dict, {})
    kind = spec.get("kind", default_kind)
    if kind == "uniform":
        if g is None:
            raise ConfigError(field, "uniform times need a problem grid")
        return g.times
    if kind == "log":
        start = _get({"_": spec}, "_.start", float, defaults["start"])
        stop = _get({"_": spec}, "_.stop", float, defaults["stop"])
        count = _get({"_": spec}, "_.count", int, defaults["count"], minimum=4)
        if not 0.0 < start < stop:
            raise ConfigError(field, "log times need 0 < start < stop")
        return np.geomspace(start, stop, count)
    raise ConfigError(f"{field}.kind", f"unknown times kind {kind!r}")


def _alpha_for(cfg: dict, command: str) -> float:
    alpha = _get(cfg, "problem.alpha", float)
    if not 0.0 < alpha <= 1.0:
        raise ConfigError("problem.alpha", f"must lie in (0, 1], got {alpha!r}")
    if command != "solve" and alpha == 1.0:
        raise ConfigError("problem.alpha", "alpha = 1 is only allowed for the solve command")
    return alpha


# ---------------------------------------------------------------------------
# artifact writing


def _atomic_write(out_dir: str, name: str, text: str) -> dict:
    data = text.encode("utf-8")
    fd, tmp = tempfile.mkstemp(dir=out_dir, prefix=f".{name}.")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.chmod(tmp, 0o644)
        os.replace(tmp, os.path.join(out_dir, name))
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return {"name": name, "bytes": len(data), "sha256": hashlib.sha256(data).hexdigest()}


def _csv(schema: str, header: str, rows) -> str:
    lines = [f"# fracspec csv schema={schema} version=1", header]
    for row in rows:
        lines.append(",".join(_fmt(cell) for cell in row))
    return "\n".join(lines) + "\n"


def _fmt(cell) -> str:
    if isinstance(cell, (int, np.integer)):
        return str(int(cell))
    return f"{float(cell):.17g}"


def _write_json(out_dir: str, name: str, payload: dict) -> dict:
    return _atomic_write(out_dir, name, json.dumps(payload, indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# command implementations: each returns (artifacts, summary_lines, extras)


def _cmd_solve(cfg: dict, base_dir: str, out_dir: str):
    alpha = _alpha_for(cfg, "solve")
    p = _build_potential(cfg, base_dir)
    g = _build_signal(cfg, base_dir)
    n_modes = _get(cfg, "problem.N", int, 64, minimum=1)
    refine = _get(cfg, "tolerances.refine", int, 3)
    tail_tol = _get(cfg, "tolerances.tail", float, 1e-2)
    timings = {}
    t0 = time.perf_counter()
    spec = eigen_solve(p, n_modes, refine=refine)
    timings["eigen_solve"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    u = solve_forward(spec, alpha, g, tail_tol=tail_tol)
    timings["solve_forward"] = time.perf_counter() - t0
    tr0, tr1 = trace(u, 0.0), trace(u, 1.0)
    artifacts = [
        _atomic_write(out_dir, "field.csv", _csv("field", "x,t,value", u.csv_rows())),
        _atomic_write(out_dir, "trace_x0.csv", _csv("trace", "t,value", zip(tr0.times, tr0.values))),
        _atomic_write(out_dir, "trace_x1.csv", _csv("trace", "t,value", zip(tr1.times, tr1.values))),
    ]
    summary = [
        f"solve: alpha={alpha:g} modes={n_modes} grid J={u.j_cells} M={u.m_steps} T={g.duration:g}",
        f"spectral tail estimate {u.tail_estimate:.3e}",
        f"trace sup |u(0,.)| = {np.max(np.abs(tr0.values)):.6e}, |u(1,.)| = {np.max(np.abs(tr1.values)):.6e}",
    ]
    return artifacts, summary, timings


def _cmd_kernel(cfg: dict, base_dir: str, out_dir: str):
    alpha = _alpha_for(cfg, "kernel")
    p = _build_potential(cfg, base_dir)
    n_modes = _get(cfg, "problem.N", int, 64, minimum=1)
    refine = _get(cfg, "tolerances.refine", int, 3)
    tail_tol = _get(cfg, "tolerances.tail", float, 1e-2)
    g = None
    if "g" in cfg.get("problem", {}):
        g = _build_signal(cfg, base_dir)
    times = _build_times(cfg, "kernel.times", "uniform" if g is not None else "log", g,
                         {"start": 1e-3, "stop": 1e6, "count": 200})
    xs = _get(cfg, "kernel.x_locations", list, [0.0, 1.0])
    timings = {}
    t0 = time.perf_counter()
    spec = eigen_solve(p, n_modes, refine=refine)
    timings["eigen_solve"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    tab = forward_kernel(spec, alpha, times, x_locations=xs, potential=p, tail_tol=tail_tol)
    timings["kernel"] = time.perf_counter() - t0
    artifacts = [
        _atomic_write(out_dir, "kernel.csv", _csv("kernel", "x,t,K", tab.csv_rows())),
        _write_json(out_dir, "kernel.json", {
            "x_locations": tab.x_locations.tolist(),
            "limits": tab.limit.tolist(),
            "tail_estimate": tab.tail_estimate,
        }),
    ]
    summary = [
        f"kernel: alpha={alpha:g} modes={n_modes} x={tab.x_locations.tolist()} times={times.size}",
        f"limits {np.array2string(tab.limit, precision=8)}  tail {tab.tail_estimate:.3e}",
    ]
    return artifacts, summary, timings


def _cmd_mlf_table(cfg: dict, base_dir: str, out_dir: str):
    g1 = _get(cfg, "mlf.gamma1", float)
    g2 = _get(cfg, "mlf.gamma2", float, 1.0)
    zs = _get(cfg, "mlf.z", list)
    if not zs or not all(isinstance(z, (int, float)) and not isinstance(z, bool) for z in zs):
        raise ConfigError("mlf.z", "need a nonempty list of numbers")
    z = np.asarray(zs, dtype=float)
    t0 = time.perf_counter()
    vals = mittag_leffler(z, g1, g2)
    timings = {"mlf": time.perf_counter() - t0}
    artifacts = [_atomic_write(out_dir, "mlf.csv", _csv("mlf", "z,value", zip(z, np.atleast_1d(vals))))]
    summary = [f"mlf-table: gamma1={g1:g} gamma2={g2:g} rows={z.size}"]
    return artifacts, summary, timings


def _order_times(cfg: dict) -> np.ndarray:
    return _build_times(cfg, "order.times", "log", None, {"start": 1e3, "stop": 1e8, "count": 40})


def _cmd_invert_order(cfg: dict, base_dir: str, out_dir: str):
    alpha = _alpha_for(cfg, "invert-order")
    p = _build_potential(cfg, base_dir)
    n_modes = _get(cfg, "problem.N", int, 64, minimum=1)
    refine = _get(cfg, "tolerances.refine", int, 3)
    times = _order_times(cfg)
    window = _get(cfg, "order.window", float, 0.5)
    refine_fit = _get(cfg, "order.refine", bool, False)
    tail_tol = _get(cfg, "tolerances.tail", float, 1e-2)
    timings = {}
    t0 = time.perf_counter()
    spec = eigen_solve(p, n_modes, refine=refine)
    tab = forward_kernel(spec, alpha, times, x_locations=(1.0,), tail_tol=tail_tol)
    timings["kernel"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    fit = estimate_order(times, tab.values[0], window=window, refine=refine_fit)
    timings["fit"] = time.perf_counter() - t0
    deficit = fit.limit - tab.values[0]
    artifacts = [
        _write_json(out_dir, "order.json", {"estimate": fit.to_dict(), "alpha_true": alpha}),
        _atomic_write(out_dir, "deficit.csv", _csv("deficit", "t,value", zip(times, deficit))),
    ]
    summary = [
        f"invert-order: alpha_true={alpha:g} alpha_hat={fit.alpha:.6f} |err|={abs(fit.alpha - alpha):.2e}",
        f"fit window t in [{fit.window[0]:g}, {fit.window[1]:g}], {fit.n_points} points",
    ]
    return artifacts, summary, timings


def _cmd_invert_spectral(cfg: dict, base_dir: str, out_dir: str):
    alpha = _alpha_for(cfg, "invert-spectral")
    p = _build_potential(cfg, base_dir)
    n_modes = _get(cfg, "spectral.n_modes", int, 2, minimum=1)
    refine = _get(cfg, "tolerances.refine", int, 3)
    times = _build_times(cfg, "spectral.times", "log", None, {"start": 1e-4, "stop": 1e4, "count": 60})
    timings = {}
    t0 = time.perf_counter()
    spec = eigen_solve(p, n_modes, refine=refine)
    data_model = ResolventModel.from_spectral(spec)
    values = data_model.kernel_values(alpha, times)
    timings["data"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    fit = extract_spectral(times, values, alpha=alpha, n_modes=n_modes)
    timings["fit"] = time.perf_counter() - t0
    lam = fit.model.lambdas
    w = fit.model.weights
    rho = 1.0 / (lam * w) if fit.model.count else np.empty(0)
    artifacts = [
        _atomic_write(out_dir, "spectra.csv", _csv("spectra", "n,lambda,rho",
                                                   zip(range(1, lam.size + 1), lam, rho))),
        _write_json(out_dir, "fit.json", fit.to_dict()),
    ]
    summary = [
        f"invert-spectral: alpha={alpha:g} modes={n_modes} residual={fit.residual:.3e} "
        f"conditioning={fit.conditioning:.3e} degenerate={fit.degenerate}",
    ]
    return artifacts, summary, timings


def _cmd_invert_potential(cfg: dict, base_dir: str, out_dir: str):
    if "alpha" in cfg.get("problem", {}):
        _alpha_for(cfg, "invert-potential")  # recovery ignores alpha but the bound still holds
    p = _build_potential(cfg, base_dir)
    n_pairs = _get(cfg, "recovery.n_pairs", int, 5, minimum=2)
    dim = _get(cfg, "recovery.dim", int, 2, minimum=1)
    basis = _get(cfg, "recovery.basis", str, "piecewise")
    reg = _get(cfg, "recovery.reg", float, 0.0)
    max_iter = _get(cfg, "recovery.max_iter", int, 60, minimum=1)
    refine = _get(cfg, "tolerances.refine", int, 3)
    timings = {}
    t0 = time.perf_counter()
    target = eigen_solve(p, n_pairs, refine=refine)
    timings["target"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    fit = recover_potential(target, basis=basis, dim=dim, reg=reg, j_cells=p.j_cells,
                            refine=refine, max_iter=max_iter)
    timings["recover"] = time.perf_counter() - t0
    grid = fit.potential.grid
    artifacts = [
        _atomic_write(out_dir, "potential.csv", _csv("potential", "x,value",
                                                     zip(grid, fit.potential.samples))),
        _write_json(out_dir, "recovery.json", fit.to_dict()),
    ]
    summary = [
        f"invert-potential: basis={basis} dim={dim} pairs={n_pairs} "
        f"objective={fit.objective:.3e} converged={fit.converged}",
        f"coefficients {np.array2string(np.asarray(fit.coefficients), precision=6)}",
    ]
    return artifacts, summary, timings


def _cmd_experiment(cfg: dict, base_dir: str, out_dir: str):
    kind = _get(cfg, "experiment.kind", str)
    alpha = _alpha_for(cfg, "experiment")
    p = _build_potential(cfg, base_dir)
    n_modes = _get(cfg, "problem.N", int, 64, minimum=1)
    refine = _get(cfg, "tolerances.refine", int, 3)
    timings = {}
    if kind == "distinguishability":
        beta = _get(cfg, "experiment.beta", float, alpha)
        if beta == 1.0:
            raise ConfigError("experiment.beta", "alpha = 1 is only allowed for the solve command")
        q = _build_potential(cfg, base_dir, "experiment.q") if "q" in cfg.get("experiment", {}) else p
        g = _build_signal(cfg, base_dir)
        endpoint = _get(cfg, "experiment.endpoint", float, 0.0)
        t0 = time.perf_counter()
        report = distinguishability(p, alpha, q, beta, g, endpoint, n_modes=n_modes, refine=refine)
        timings["experiment"] = time.perf_counter() - t0
        artifacts = [_write_json(out_dir, "report.json", report.to_dict())]
        summary = [
            f"distinguishability: gap={report.trace_gap:.6e} budget={report.budget:.3e} verdict={report.verdict}",
        ]
        return artifacts, summary, timings
    if kind == "unique-continuation":
        g = _build_signal(cfg, base_dir)
        t0 = time.perf_counter()
        report = unique_continuation(p, alpha, g, n_modes=n_modes, refine=refine)
        timings["experiment"] = time.perf_counter() - t0
        artifacts = [_write_json(out_dir, "report.json", report.to_dict())]
        summary = [
            f"unique-continuation: verdict={report.verdict} "
            f"boundary_ratio={report.extras.get('boundary_ratio', 0.0):.4f}",
        ]
        if "deconvolution_rel_err" in report.extras:
            summary.append(f"deconvolution relative error {report.extras['deconvolution_rel_err']:.3e}")
        return artifacts, summary, timings
    if kind == "eigenvalue-matching":
        q = _build_potential(cfg, base_dir, "experiment.q")
        t0 = time.perf_counter()
        spec_p = eigen_solve(p, n_modes, refine=refine)
        spec_q = eigen_solve(q, n_modes, refine=refine)
        match = eigenvalue_matching(spec_p, spec_q)
        timings["experiment"] = time.perf_counter() - t0
        rows = zip(range(1, n_modes + 1), match.lambda_diff, match.rho_diff)
        artifacts = [
            _write_json(out_dir, "report.json", match.to_dict()),
            _atomic_write(out_dir, "matching.csv", _csv("matching", "n,lambda_diff,rho_diff", rows)),
        ]
        summary = [
            f"eigenvalue-matching: max lambda diff {match.max_lambda_diff:.3e}, "
            f"max rho diff {match.max_rho_diff:.3e}",
        ]
        return artifacts, summary, timings
    raise ConfigError("experiment.kind", f"unknown experiment kind {kind!r}")


_DISPATCH = {
    "solve": _cmd_solve,
    "kernel": _cmd_kernel,
    "mlf-table": _cmd_mlf_table,
    "invert-order": _cmd_invert_order,
    "invert-spectral": _cmd_invert_spectral,
    "invert-potential": _cmd_invert_potential,
    "experiment": _cmd_experiment,
}


# ---------------------------------------------------------------------------
# driver


def _emit_error(code: int, exc: BaseException) -> None:
    payload = {"error": {"code": code, "type": type(exc).__name__, "message": str(exc)}}
    if isinstance(exc, ConfigError):
        payload["error"]["field"] = exc.field
    print(json.dumps(payload), file=sys.stderr)


def _parse_args(argv):
    parser = argparse.ArgumentParser(prog="fracspec", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="|".join(_COMMANDS))
    for name in _COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", required=True, help="path to the JSON run configuration")
        sp.add_argument("--out", default=None, help="output directory (default: config output_dir or '.')")
        sp.add_argument("--seed", type=int, default=None, help="seed recorded in the manifest")
        sp.add_argument("--override", action="append", default=[], metavar="KEY=VALUE",
                        help="patch a scalar config field by dotted path; repeatable")
    return parser.parse_args(argv)


def main(argv=None) -> int:
    args = _parse_args(argv)
    started = time.perf_counter()
    try:
        try:
            with open(args.config, encoding="utf-8") as fh:
                cfg = json.load(fh)
        except OSError as exc:
            raise ConfigError("--config", f"cannot read {args.config}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError("--config", f"invalid JSON in {args.config}: {exc}") from exc
        if not isinstance(cfg, dict):
            raise ConfigError("--config", "top-level JSON value must be an object")
        for spec in args.override:
            _apply_override(cfg, spec)
        declared = _get(cfg, "command", str, args.command)
        if declared != args.command:
            raise ConfigError("command", f"config says {declared!r} but the subcommand is {args.command!r}")
        if declared not in _COMMANDS:
            raise ConfigError("command", f"unknown command {declared!r}")
        seed = args.seed if args.seed is not None else _get(cfg, "seed", int, 0)
        out_dir = args.out or _get(cfg, "output_dir", str, ".")
        base_dir = os.path.dirname(os.path.abspath(args.config))
        out_dir = _resolve_path(base_dir, out_dir)
        os.makedirs(out_dir, exist_ok=True)

        digest_payload = dict(cfg)
        digest_payload["command"] = args.command
        digest_payload["seed"] = seed
        config_digest = hashlib.sha256(
            json.dumps(digest_payload, sort_keys=True).encode()
        ).hexdigest()

        artifacts, summary, timings = _DISPATCH[args.command](cfg, base_dir, out_dir)

        summary_text = "\n".join(summary) + "\n"
        artifacts.append(_atomic_write(out_dir, "summary.txt", summary_text))
        manifest = {
            "command": args.command,
            "config_digest": config_digest,
            "seed": seed,
            "versions": {
                "fracspec": __version__,
                "numpy": np.__version__,
                "python": sys.version.split()[0],
            },
            "timings": {**timings, "total": time.perf_counter() - started},
            "outputs": artifacts,
        }
        try:
            import scipy

            manifest["versions"]["scipy"] = scipy.__version__
        except ImportError:  # pragma: no cover - scipy is a hard dependency
            pass
        _write_json(out_dir, "manifest.json", manifest)
        sys.stdout.write(summary_text)
        return 0
    except (HypothesisViolation, DegeneratePotentialError, CompatibilityError) as exc:
        _emit_error(3, exc)
        return 3
    except (NumericError, PoleProximityError, FloatingPointError, np.linalg.LinAlgError) as exc:
        _emit_error(4, exc)
        return 4
    except (ParameterError, GridError, FracspecError) as exc:
        _emit_error(2, exc)
        return 2


if __name__ == "__main__":
    sys.exit(main())
