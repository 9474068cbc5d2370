"""Config-driven sweeps, pole tables, state dumps and the invariant suite.

Configs are INI files read with :mod:`configparser`.  Sections:

``[model]``
    ``type`` (``delta_shell`` or ``rectangular``) plus the fixed parameters
    (``lambda``, ``a``, ``shell_weight`` / ``v0``, ``length``).
``[sweep]``
    ``parameter``, ``min``, ``max``, ``count``, ``spacing`` (``linear`` or
    ``log``); or ``values`` as a comma-separated list.
``[poles]``
    ``n_max``.
``[state]``
    ``indices`` (comma list), ``prescriptions``, and for ``state-dump``
    ``x_min``, ``x_max``, ``points``.
``[verify]``
    ``n_orthonormal``, ``closure_small``, ``closure_large``.
``[solver]``
    ``tol``, ``max_iter``.
``[output]``
    ``path``, ``format`` (``csv`` or ``json``), ``workers``.

Every table is a list of rows with a fixed column tuple; :func:`write_table`
renders it as CSV (``# schema=1`` header, 17 significant digits) or JSON.
"""

from __future__ import annotations

import configparser
import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .expectation import (
    HAMILTONIAN,
    MOMENTUM,
    MOMENTUM_SQUARED,
    PRESCRIPTIONS,
    expectation,
    expval_berggren,
    expval_surface,
)
from .poles import (
    DEFAULT_MAX_ITER,
    DEFAULT_TOL,
    NoConvergence,
    find_poles,
    track_poles,
)
from .potentials import DeltaShellPotential, PotentialModel, make_model
from .states import (
    build_state,
    build_states,
    closure_residual,
    decay_width_residual,
    eval_state,
    expand,
    normalization_residual,
    overlap_matrix,
    quadrature_grid,
    reconstruct,
)
from .uncertainty import classify_validity, hamiltonian_dispersion, infinite_wall_reference, uncertainty_product

__all__ = [
    "SCHEMA_VERSION",
    "ConfigError",
    "SweepConfig",
    "Table",
    "load_config",
    "parse_config",
    "pole_table",
    "trajectory_table",
    "uncertainty_sweep",
    "state_dump",
    "verify_suite",
    "write_table",
    "POLE_COLUMNS",
    "TRAJECTORY_COLUMNS",
    "SWEEP_COLUMNS",
    "STATE_COLUMNS",
    "VERIFY_COLUMNS",
]

SCHEMA_VERSION = 1

POLE_COLUMNS = ("n", "re_k", "im_k", "re_E", "im_E", "classification", "parity", "residual")
TRAJECTORY_COLUMNS = ("parameter", "n", "re_k", "im_k", "re_E", "im_E", "classification", "residual", "status")
SWEEP_COLUMNS = (
    "parameter", "n", "prescription", "re_k", "im_k", "classification", "residual",
    "mean_r", "mean_r2", "mean_p2", "var_r", "product", "satisfies_bound",
    "proper_pole", "positive_p2", "positive_var", "validity", "infinite_wall", "status",
)
STATE_COLUMNS = ("n", "x", "re_u", "im_u", "abs_u")
VERIFY_COLUMNS = ("check", "status", "value", "tolerance", "detail")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SweepConfig:
    model: PotentialModel
    parameter: str | None = None
    grid: tuple[float, ...] = ()
    n_max: int = 3
    indices: tuple[int, ...] = (1,)
    prescriptions: tuple[str, ...] = PRESCRIPTIONS
    x_range: tuple[float, float] | None = None
    points: int = 201
    n_orthonormal: int = 5
    closure_small: int = 10
    closure_large: int = 40
    tol: float = DEFAULT_TOL
    max_iter: int = DEFAULT_MAX_ITER
    out: str | None = None
    format: str = "csv"
    workers: int = 1


@dataclass
class Table:
    """Rows of one command's output; ``partial`` marks incomplete convergence."""

    columns: tuple[str, ...]
    rows: list[tuple] = field(default_factory=list)
    partial: bool = False


def _ints(text: str, what: str) -> tuple[int, ...]:
    try:
        values = tuple(int(v) for v in text.replace(",", " ").split())
    except ValueError:
        raise ConfigError(f"{what} must be a list of integers, got {text!r}") from None
    if not values:
        raise ConfigError(f"{what} is empty")
    return values


def _grid(sec: configparser.SectionProxy) -> tuple[float, ...]:
    if "values" in sec:
        try:
            values = tuple(float(v) for v in sec["values"].replace(",", " ").split())
        except ValueError:
            raise ConfigError(f"[sweep] values must be numbers, got {sec['values']!r}") from None
        if not values:
            raise ConfigError("[sweep] values is empty")
        return values
    try:
        lo, hi = sec.getfloat("min"), sec.getfloat("max")
        count = sec.getint("count", 1)
    except ValueError as exc:
        raise ConfigError(f"[sweep] {exc}") from None
    if lo is None or hi is None:
        raise ConfigError("[sweep] needs either 'values' or 'min' and 'max'")
    if count < 1:
        raise ConfigError(f"[sweep] count must be >= 1, got {count}")
    spacing = sec.get("spacing", "linear").strip().lower()
    if count == 1:
        return (lo,)
    if spacing == "linear":
        return tuple(float(v) for v in np.linspace(lo, hi, count))
    if spacing == "log":
        if lo <= 0 or hi <= 0:
            raise ConfigError("[sweep] log spacing needs positive min and max")
        return tuple(float(v) for v in np.geomspace(lo, hi, count))
    raise ConfigError(f"[sweep] spacing must be 'linear' or 'log', got {spacing!r}")


def parse_config(text: str) -> SweepConfig:
    """Parse INI text into a validated :class:`SweepConfig`."""
    cp = configparser.ConfigParser()
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    if not cp.has_section("model"):
        raise ConfigError("missing [model] section")
    params = {k: v for k, v in cp["model"].items() if k != "type"}
    try:
        model = make_model(cp["model"].get("type", ""), **params)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"[model] {exc}") from None

    kw: dict = {"model": model}
    if cp.has_section("sweep"):
        sec = cp["sweep"]
        name = sec.get("parameter")
        if name is None:
            raise ConfigError("[sweep] needs 'parameter'")
        try:
            model.get_parameter(name)
        except ValueError as exc:
            raise ConfigError(f"[sweep] {exc}") from None
        kw["parameter"] = name
        kw["grid"] = _grid(sec)
        try:
            for v in kw["grid"]:
                model.with_parameter(name, v)
        except ValueError as exc:
            raise ConfigError(f"[sweep] {exc}") from None
    try:
        if cp.has_section("poles"):
            kw["n_max"] = cp["poles"].getint("n_max", 3)
        if cp.has_section("state"):
            sec = cp["state"]
            if "indices" in sec:
                kw["indices"] = _ints(sec["indices"], "[state] indices")
            if "prescriptions" in sec:
                kw["prescriptions"] = tuple(p.strip() for p in sec["prescriptions"].split(",") if p.strip())
            if "x_min" in sec or "x_max" in sec:
                kw["x_range"] = (sec.getfloat("x_min", 0.0), sec.getfloat("x_max", model.range))
            kw["points"] = sec.getint("points", 201)
        if cp.has_section("verify"):
            sec = cp["verify"]
            kw["n_orthonormal"] = sec.getint("n_orthonormal", 5)
            kw["closure_small"] = sec.getint("closure_small", 10)
            kw["closure_large"] = sec.getint("closure_large", 40)
        if cp.has_section("solver"):
            kw["tol"] = cp["solver"].getfloat("tol", DEFAULT_TOL)
            kw["max_iter"] = cp["solver"].getint("max_iter", DEFAULT_MAX_ITER)
        if cp.has_section("output"):
            sec = cp["output"]
            kw["out"] = sec.get("path")
            kw["format"] = sec.get("format", "csv").strip().lower()
            kw["workers"] = sec.getint("workers", 1)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return validate(SweepConfig(**kw))


def validate(cfg: SweepConfig) -> SweepConfig:
    if cfg.n_max < 1:
        raise ConfigError(f"n_max must be >= 1, got {cfg.n_max}")
    if min(cfg.indices) < 1:
        raise ConfigError("state indices must be >= 1")
    bad = [p for p in cfg.prescriptions if p not in PRESCRIPTIONS]
    if bad or not cfg.prescriptions:
        raise ConfigError(f"prescriptions must be drawn from {PRESCRIPTIONS}, got {cfg.prescriptions}")
    if cfg.format not in ("csv", "json"):
        raise ConfigError(f"format must be csv or json, got {cfg.format!r}")
    if cfg.workers < 1:
        raise ConfigError("workers must be >= 1")
    if not cfg.tol > 0:
        raise ConfigError("tol must be positive")
    if cfg.points < 2:
        raise ConfigError("points must be >= 2")
    if not 0 < cfg.closure_small < cfg.closure_large:
        raise ConfigError("need 0 < closure_small < closure_large")
    return cfg


def load_config(path: str | Path) -> SweepConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text)


def _pole_cells(pole):
    e = pole.energy
    return (pole.k.real, pole.k.imag, e.real, e.imag, pole.classification)


def pole_table(cfg: SweepConfig) -> Table:
    table = Table(POLE_COLUMNS)
    try:
        poles = find_poles(cfg.model, cfg.n_max, cfg.tol, cfg.max_iter)
    except NoConvergence as exc:
        poles, table.partial = exc.partial, True
    for p in poles:
        table.rows.append((p.index, *_pole_cells(p), p.parity or "", p.residual))
    return table


def _require_sweep(cfg: SweepConfig):
    if cfg.parameter is None or not cfg.grid:
        raise ConfigError("this command needs a [sweep] section")


def trajectory_table(cfg: SweepConfig) -> Table:
    _require_sweep(cfg)
    traj = track_poles(cfg.model, cfg.parameter, cfg.grid, cfg.indices, cfg.tol, cfg.max_iter)
    table = Table(TRAJECTORY_COLUMNS)
    for value, n, pole, status in traj.rows():
        if pole is None:
            table.rows.append((value, n, math.nan, math.nan, math.nan, math.nan, "", math.nan, status))
        else:
            table.rows.append((value, n, *_pole_cells(pole), pole.residual, status))
    table.partial = any(s in ("continuity_break", "no_convergence") for s in traj.status.values())
    return table


def _sweep_point(cfg: SweepConfig, value: float) -> tuple[list[tuple], bool]:
    model = cfg.model.with_parameter(cfg.parameter, value)
    n_need = max(cfg.indices)
    partial = False
    try:
        poles = find_poles(model, n_need, cfg.tol, cfg.max_iter)
    except NoConvergence as exc:
        poles, partial = exc.partial, True
    wall = isinstance(model, DeltaShellPotential)
    rows = []
    for n in cfg.indices:
        ref = infinite_wall_reference(n) if wall else math.nan
        if n > len(poles):
            for pres in cfg.prescriptions:
                rows.append((value, n, pres, *([math.nan] * 2), "", *([math.nan] * 6),
                             False, False, False, False, "undefined", ref, "no_convergence"))
            continue
        pole = poles[n - 1]
        state = build_state(pole, model)
        for pres in cfg.prescriptions:
            rep = uncertainty_product(state, pres)
            f = rep.validity_flags
            rows.append((
                value, n, pres, pole.k.real, pole.k.imag, pole.classification, pole.residual,
                rep.mean_position, rep.mean_position_squared, rep.mean_p2, rep.var_position, rep.product,
                rep.satisfies_bound, f.proper_pole, f.positive_p2, f.positive_var,
                classify_validity(rep), ref, "ok",
            ))
    return rows, partial


def uncertainty_sweep(cfg: SweepConfig) -> Table:
    """One row per (grid value, state index, prescription), in that order.

    Grid points run on ``cfg.workers`` threads; ``map`` keeps grid order.
    """
    _require_sweep(cfg)
    table = Table(SWEEP_COLUMNS)
    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        for rows, partial in pool.map(lambda v: _sweep_point(cfg, v), cfg.grid):
            table.rows.extend(rows)
            table.partial |= partial
    return table


def state_dump(cfg: SweepConfig) -> Table:
    table = Table(STATE_COLUMNS)
    try:
        poles = find_poles(cfg.model, max(cfg.indices), cfg.tol, cfg.max_iter)
    except NoConvergence as exc:
        poles, table.partial = exc.partial, True
    lo, hi = cfg.x_range if cfg.x_range is not None else (cfg.model.geometry.left, cfg.model.geometry.right)
    xs = np.linspace(lo, hi, cfg.points)
    for n in cfg.indices:
        if n > len(poles):
            continue
        u = eval_state(build_state(poles[n - 1], cfg.model), xs)
        for x, val in zip(xs, u):
            table.rows.append((n, float(x), val.real, val.imag, abs(val)))
    return table


def _check(rows, name, value, tol, detail="", expected_fail=False):
    ok = bool(value <= tol) if not math.isnan(value) else False
    status = "pass" if ok else ("expected_fail" if expected_fail else "fail")
    rows.append((name, status, float(value), float(tol), detail))


def _rel(a: complex, b: complex, scale: float) -> float:
    return abs(a - b) / max(abs(a), abs(b), scale)


def verify_suite(cfg: SweepConfig) -> Table:
    """Invariant checks for the configured model.

    Status is ``pass``, ``fail`` or ``expected_fail``; the last marks an
    improper pole, which is a property of a shallow potential rather than a
    numerical failure.
    """
    model = cfg.model
    table = Table(VERIFY_COLUMNS)
    rows = table.rows
    n_poles = max(cfg.n_orthonormal, cfg.closure_large)
    try:
        poles = find_poles(model, n_poles, cfg.tol, cfg.max_iter)
    except NoConvergence as exc:
        poles, table.partial = exc.partial, True
        rows.append(("poles_found", "fail", float(len(poles)), float(n_poles), "partial convergence"))
    if not poles:
        return table
    states = build_states(poles, model)
    head = states[: cfg.n_orthonormal]

    _check(rows, "pole_residual", max(p.residual for p in poles), 1e-10, f"{len(poles)} poles")
    for s in head:
        p = s.pole
        law = (p.energy.real > 0) == (p.alpha > p.beta)
        rows.append((f"sign_law[n={p.index}]", "pass" if law else "fail", p.energy.real, 0.0,
                     f"alpha={p.alpha:.6g} beta={p.beta:.6g}"))
        rows.append((f"proper_pole[n={p.index}]", "pass" if p.is_proper else "expected_fail",
                     p.energy.real, 0.0, "Re E > 0" if p.is_proper else "improper pole, Re E < 0"))

    _check(rows, "normalization", max(abs(normalization_residual(s)) for s in head), 1e-10)
    g = overlap_matrix(head)
    eye = np.eye(len(head))
    off = np.max(np.abs(g - eye) * (1 - eye)) if len(head) > 1 else 0.0
    _check(rows, "orthonormality_offdiag", off, 1e-8, f"n<={len(head)}")
    _check(rows, "orthonormality_diag", np.max(np.abs(np.diag(g) - 1)), 1e-10, f"n<={len(head)}")

    widths = [decay_width_residual(s) for s in head if s.pole.alpha > 0 and s.pole.beta > 0]
    if widths:
        _check(rows, "decay_width", max(widths), 1e-8)

    eq, zero, eig, dh = 0.0, 0.0, 0.0, 0.0
    for s in head:
        k2 = abs(s.k) ** 2
        for op, scale in ((HAMILTONIAN, k2), (MOMENTUM, abs(s.k)), (MOMENTUM_SQUARED, k2)):
            a = expval_surface(s, op).raw
            b = expval_berggren(s, op).raw
            eq = max(eq, _rel(a, b, scale))
        for pres in PRESCRIPTIONS:
            zero = max(zero, abs(expectation(s, MOMENTUM, pres).raw) / abs(s.k))
            eig = max(eig, _rel(expectation(s, HAMILTONIAN, pres).raw, s.energy, k2))
            dh = max(dh, hamiltonian_dispersion(s, pres))
    _check(rows, "prescription_equivalence", eq, 1e-12, "H, p, p^2")
    _check(rows, "momentum_zero", zero, 1e-12)
    _check(rows, "energy_eigenvalue", eig, 1e-12)
    _check(rows, "energy_dispersion", dh, 0.0)

    # The truncated closure sum is real; its pointwise value does not decay
    # with N, so completeness is checked through expansion of a smooth function.
    x0 = model.geometry.left + 0.3 * model.range
    x1 = model.geometry.left + 0.7 * model.range
    c = closure_residual(states[: cfg.closure_large], x0, x1)
    _check(rows, "closure_real", abs(c.imag), 1e-12, f"sum={c.real:.6g}")
    if len(states) >= cfg.closure_large:
        errs = _expansion_errors(model, states, (cfg.closure_small, cfg.closure_large))
        _check(rows, "expansion_convergence", errs[1] / errs[0], 1.0,
               f"max error N={cfg.closure_small}: {errs[0]:.3e}, N={cfg.closure_large}: {errs[1]:.3e}")
    return table


def _expansion_errors(model, states, sizes: Sequence[int]) -> list[float]:
    lo, L = model.geometry.left, model.range

    def psi(x):
        t = (x - lo) / L
        return t * t * (1 - t) ** 2

    grid = quadrature_grid(model, panels=max(64, 4 * sizes[-1]), order=16)
    xs = lo + L * np.linspace(0.1, 0.9, 81)
    out = []
    for n in sizes:
        c = expand(psi(grid.nodes), states[:n], grid)
        out.append(float(np.max(np.abs(reconstruct(c, states[:n], xs) - psi(xs)))))
    return out


def _cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    return str(v)


def _json_cell(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return None if math.isnan(v) else float(v)
    return v


def write_table(table: Table, fmt: str = "csv", stream=None) -> str:
    """Render ``table``; returns the text and writes it to ``stream`` if given."""
    if fmt == "csv":
        buf = io.StringIO()
        buf.write(f"# schema={SCHEMA_VERSION}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(table.columns)
        w.writerows([_cell(v) for v in row] for row in table.rows)
        text = buf.getvalue()
    elif fmt == "json":
        doc = {
            "schema": SCHEMA_VERSION,
            "columns": list(table.columns),
            "partial": table.partial,
            "rows": [dict(zip(table.columns, map(_json_cell, row))) for row in table.rows],
        }
        text = json.dumps(doc, indent=1) + "\n"
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if stream is not None:
        stream.write(text)
    return text
