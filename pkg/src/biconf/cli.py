"""Command-line driver for reproducible verification runs.

Subcommands
-----------
``verify``    run the general system, the matching reductions and the
              bitension oracle on one example configuration; exit 0 on
              PASS (all residuals below threshold), 1 on FAIL.
``residual``  evaluate a single system and emit the report records.
``sweep``     tabulate a parameter range (CSV), or the certificate grid.
``signs``     exact-arithmetic certificate grid (JSON).
``isoparam``  sample an example's conformal factor and test whether it
              is isoparametric (CSV table + JSON verdict).
``report``    run every claim suite and merge into one JSON document,
              or merge previously written JSON reports.

Configs are taken from flags, optionally over a JSON file
(``--config``); flags override file values.  The default seed comes from
``BICONF_SEED`` (fallback 12345).  Identical config + seed produces a
byte-identical JSON report except for the top-level ``timestamp`` field.

Sampling boxes (documented contract): euclidean-style charts draw
uniformly from [-2, 2]^m, the hyperbolic chart keeps x_m in [0.5, 2],
and stereographic charts reject |x| > 2.

Exit codes: 0 - every checked invariant holds; 1 - a verification
verdict failed; 2 - configuration error (unknown example, bad range,
unreadable input, ...).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import catalog, geometry, isoparametric, residuals, umbilic
from .errors import BiconfError, ConfigError
from .jets import backend

DEFAULT_SEED = 12345
#: CLI verdict threshold for "residual vanishes".  Looser than the
#: library's exact-parameter threshold because CLI parameters are
#: typically truncated decimals (e.g. a=0.8660254), which perturb an
#: exact solution by ~1e-6 in residual norm.
CLI_ZERO_THRESHOLD = 1e-5
CLI_NONZERO_FLOOR = residuals.NONZERO_FLOOR

SWEEP_COLUMNS = ("example", "m", "param", "value", "condition_poly",
                 "max_normal", "max_tangential", "verdict")
SIGNS_COLUMNS = ("m", "c", "H2", "A", "B", "chain", "P1", "P2", "P3",
                 "verdict")
ISOPARAM_COLUMNS = ("lambda", "alpha", "beta")


# ----------------------------------------------------------------------
# config plumbing
# ----------------------------------------------------------------------
def _default_seed() -> int:
    env = os.environ.get("BICONF_SEED")
    if env is None:
        return DEFAULT_SEED
    try:
        return int(env)
    except ValueError:
        raise ConfigError(f"BICONF_SEED must be an integer, got {env!r}")


def parse_params(text: str | None) -> dict:
    """Parse ``k=v,k=v`` example parameters.

    ``m`` is an integer; ``a``/``b`` map onto the family-appropriate
    fields (``a_vec``/``b_scalar`` for euclidean_graph, ``a_radius``/
    ``b_height`` for sphere_umbilic); vector values use colons
    (``a=1:0:0:0``).
    """
    params: dict = {}
    if not text:
        return params
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if "=" not in item:
            raise ConfigError(f"bad parameter {item!r}; expected k=v")
        key, value = item.split("=", 1)
        key = key.strip()
        value = value.strip()
        if key == "m":
            params["m"] = int(value)
        elif ":" in value:
            params[key] = tuple(float(v) for v in value.split(":"))
        else:
            params[key] = float(value)
    return params


def _spec_params(name: str, params: dict) -> dict:
    out = {"m": params["m"]}
    if "t" in params:
        out["t"] = params["t"]
    if name == "euclidean_graph":
        if "a" in params:
            a = params["a"]
            out["a_vec"] = a if isinstance(a, tuple) else (
                (float(a),) + (0.0,) * (params["m"] - 1))
        if "b" in params:
            out["b_scalar"] = params["b"]
    elif name == "sphere_umbilic":
        if "a" in params:
            out["a_radius"] = params["a"]
        if "b" in params:
            out["b_height"] = params["b"]
    return out


def build_member(name: str, params: dict) -> catalog.CatalogMember:
    if "m" not in params:
        raise ConfigError("parameters must include the dimension m")
    try:
        return catalog.build_example(name, **_spec_params(name, params))
    except (ValueError, TypeError) as err:
        raise ConfigError(str(err)) from err


def load_config(args: argparse.Namespace) -> dict:
    """Merge a JSON config file (if given) under the explicit flags."""
    cfg: dict = {}
    path = getattr(args, "config", None)
    if path:
        try:
            cfg = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as err:
            raise ConfigError(f"cannot read config {path}: {err}") from err
        if not isinstance(cfg, dict):
            raise ConfigError(f"config {path} must hold a JSON object")
    merged = dict(cfg)
    for key in ("example", "params", "points", "seed", "json", "csv", "out"):
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    return merged


def write_json(path: str | None, payload: dict) -> str:
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)
    return text


def _timestamp() -> str:
    return datetime.now(timezone.utc).isoformat()


# ----------------------------------------------------------------------
# verify / residual
# ----------------------------------------------------------------------
def _applicable_reductions(member: catalog.CatalogMember, point) -> list[str]:
    from .hypersurface import ImmersionFrame
    fr = ImmersionFrame(member.immersion, point)
    m = member.m
    A = fr.shape_values
    H = fr.mean_curvature.value
    scale = 1.0 + np.abs(A).max()
    out = []
    if m == 2:
        out.append("surface")
        return out
    if np.abs(A).max() <= 1e-10 * scale:
        out.append("totally_geodesic")
    if abs(H) <= 1e-10 * scale:
        out.append("minimal")
    if (np.abs(A - H * np.eye(m)).max() <= 1e-9 * (1.0 + abs(H))
            and abs(H) > 1e-10):
        out.append("totally_umbilical")
    return out


def run_verify(member: catalog.CatalogMember, points: np.ndarray,
               zero_threshold: float = CLI_ZERO_THRESHOLD,
               oracle_threshold: float = CLI_ZERO_THRESHOLD) -> dict:
    """Evaluate general + matching reductions + oracle over the points."""
    systems = ["general"] + _applicable_reductions(member, points[0])
    results: dict = {}
    for system in systems:
        fn = residuals.RESIDUAL_FUNCTIONS[system]
        reports = [fn(member.immersion, p) for p in points]
        results[system] = {
            "reports": [r.to_dict() for r in reports],
            "summary": {
                "max_normal": max(r.norm_normal for r in reports),
                "max_tangential": max(r.norm_tangential for r in reports),
            },
        }
    oracle_norms = [
        residuals.ambient_norm(member.immersion, p,
                               residuals.bitension_oracle(member.immersion, p))
        for p in points]
    general_max = max(max(results[s]["summary"]["max_normal"],
                          results[s]["summary"]["max_tangential"])
                      for s in systems)
    oracle_max = max(oracle_norms)
    general_ok = general_max < zero_threshold
    oracle_ok = oracle_max < oracle_threshold
    ratios = []
    for p, onorm in zip(points, oracle_norms):
        gmax = max(abs(residuals.residual_general(member.immersion, p).normal),
                   1e-300)
        ratios.append(onorm / gmax)
    return {
        "example": member.name,
        "description": member.description,
        "systems": results,
        "oracle": {"max_norm": oracle_max, "norms": oracle_norms,
                   "pointwise_ratio_to_general_normal": ratios},
        "condition_polynomial": member.condition_value(),
        "verdict": "PASS" if (general_ok and oracle_ok) else "FAIL",
        "thresholds": {"zero": zero_threshold, "oracle": oracle_threshold},
    }


def cmd_verify(args) -> int:
    cfg = load_config(args)
    name = cfg.get("example")
    if not name:
        raise ConfigError("verify requires --example")
    params = cfg.get("params")
    if isinstance(params, str) or params is None:
        params = parse_params(params)
    member = build_member(name, params)
    seed = int(cfg.get("seed", _default_seed()))
    n = int(cfg.get("points", 20))
    rng = geometry.rng_from_seed(seed)
    points = member.sample(n, rng, generic=True)
    payload = run_verify(member, points)
    payload.update({"command": "verify", "seed": seed, "points": n,
                    "params": {k: (list(v) if isinstance(v, tuple) else v)
                               for k, v in params.items()},
                    "backend": backend.backend_name(),
                    "timestamp": _timestamp()})
    write_json(cfg.get("json"), payload)
    return 0 if payload["verdict"] == "PASS" else 1


def cmd_residual(args) -> int:
    cfg = load_config(args)
    name = cfg.get("example")
    if not name:
        raise ConfigError("residual requires --example")
    system = args.system
    if system not in residuals.SYSTEMS:
        raise ConfigError(
            f"unknown system {system!r}; choose from {residuals.SYSTEMS}")
    params = cfg.get("params")
    if isinstance(params, str) or params is None:
        params = parse_params(params)
    member = build_member(name, params)
    seed = int(cfg.get("seed", _default_seed()))
    n = int(cfg.get("points", 20))
    rng = geometry.rng_from_seed(seed)
    points = member.sample(n, rng, generic=True)
    fn = residuals.RESIDUAL_FUNCTIONS[system]
    try:
        reports = [fn(member.immersion, p) for p in points]
    except BiconfError as err:
        raise ConfigError(f"cannot evaluate {system} on {name}: {err}") from err
    max_normal = max(r.norm_normal for r in reports)
    max_tangential = max(r.norm_tangential for r in reports)
    top = max(max_normal, max_tangential)
    threshold = (CLI_ZERO_THRESHOLD if system != "oracle"
                 else residuals.ORACLE_ZERO_THRESHOLD)
    if top < threshold:
        verdict = "zero"
    elif top > CLI_NONZERO_FLOOR:
        verdict = "nonzero"
    else:
        verdict = "ambiguous"
    payload = {
        "command": "residual",
        "system": system,
        "example": name,
        "params": {k: (list(v) if isinstance(v, tuple) else v)
                   for k, v in params.items()},
        "seed": seed,
        "points": n,
        "reports": [r.to_dict() for r in reports],
        "summary": {"max_normal": max_normal,
                    "max_tangential": max_tangential,
                    "verdict": verdict},
        "backend": backend.backend_name(),
        "timestamp": _timestamp(),
    }
    write_json(cfg.get("json"), payload)
    return 0 if verdict == "zero" else 1


# ----------------------------------------------------------------------
# sweep
# ----------------------------------------------------------------------
def parse_range(text: str) -> np.ndarray:
    try:
        start, stop, step = (float(v) for v in text.split(":"))
    except ValueError:
        raise ConfigError(
            f"bad range {text!r}; expected start:stop:step") from None
    if step <= 0 or stop < start:
        raise ConfigError(f"empty or invalid range {text!r}")
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    if count <= 0:
        raise ConfigError(f"empty range {text!r}")
    return start + step * np.arange(count)


def _write_csv(path: str | None, header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    text = buf.getvalue()
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)
    return text


def cmd_sweep(args) -> int:
    cfg = load_config(args)
    seed = int(cfg.get("seed", _default_seed()))
    n = int(cfg.get("points", 3))
    if args.signs:
        if args.m_range is None:
            raise ConfigError("--signs sweep requires --m-range")
        lo, hi = (int(v) for v in args.m_range.split(":"))
        if hi < lo or lo < 4:
            raise ConfigError("signs sweep needs 4 <= lo <= hi")
        cert = umbilic.sign_certificate(hi)
        rows = [(cell.m, str(cell.c), str(cell.H2), str(cell.A), str(cell.B),
                 str(cell.chain), cell.P1, cell.P2, cell.P3,
                 "negative" if cell.ok else "VIOLATED")
                for cell in cert.cells if lo <= cell.m <= hi]
        if not rows:
            raise ConfigError("signs sweep produced no rows")
        _write_csv(cfg.get("csv"), SIGNS_COLUMNS, rows)
        return 0 if all(row[-1] == "negative" for row in rows) else 1
    name = cfg.get("example")
    if not name:
        raise ConfigError("sweep requires --example (or --signs)")
    if args.t_range is None:
        raise ConfigError("example sweep requires --t-range")
    values = parse_range(args.t_range)
    params = cfg.get("params")
    if isinstance(params, str) or params is None:
        params = parse_params(params)
    if args.m is not None:
        params["m"] = args.m
    rows = []
    all_decisive = True
    for t in values:
        p = dict(params)
        p["t"] = float(t)
        try:
            member = build_member(name, p)
        except ConfigError:
            raise
        cond = member.condition_value()
        rng = geometry.rng_from_seed(seed)
        try:
            points = member.sample(n, rng, generic=True)
            reports = [residuals.residual_general(member.immersion, q)
                       for q in points]
            max_normal = max(r.norm_normal for r in reports)
            max_tangential = max(r.norm_tangential for r in reports)
        except BiconfError:
            max_normal = float("nan")
            max_tangential = float("nan")
        top = max(max_normal, max_tangential)
        if top < CLI_ZERO_THRESHOLD:
            verdict = "zero"
        elif top > CLI_NONZERO_FLOOR:
            verdict = "nonzero"
        else:
            verdict = "ambiguous"
            all_decisive = False
        rows.append((name, member.m, "t", f"{t:.6g}",
                     "" if cond is None else repr(float(cond)),
                     repr(float(max_normal)), repr(float(max_tangential)),
                     verdict))
    _write_csv(cfg.get("csv"), SWEEP_COLUMNS, rows)
    return 0 if all_decisive else 1


# ----------------------------------------------------------------------
# signs
# ----------------------------------------------------------------------
def parse_grid(text: str | None) -> tuple[tuple, tuple]:
    from fractions import Fraction
    if not text:
        return umbilic.DEFAULT_C_GRID, umbilic.DEFAULT_H2_GRID
    cs, h2s = None, None
    for part in text.split(";"):
        key, _, values = part.partition("=")
        vals = tuple(Fraction(v) for v in values.split(","))
        if key.strip() == "c":
            cs = vals
        elif key.strip() == "H2":
            h2s = vals
        else:
            raise ConfigError(f"bad grid key {key!r}; use c=...;H2=...")
    return cs or umbilic.DEFAULT_C_GRID, h2s or umbilic.DEFAULT_H2_GRID


def cmd_signs(args) -> int:
    cfg = load_config(args)
    m_max = args.m_max
    if m_max < 4:
        raise ConfigError("--m-max must be at least 4")
    c_grid, h2_grid = parse_grid(args.grid)
    try:
        cert = umbilic.sign_certificate(m_max, c_grid, h2_grid)
    except ValueError as err:
        raise ConfigError(str(err)) from err
    payload = {
        "command": "signs",
        "m_max": m_max,
        "grid": {"c": [str(c) for c in c_grid],
                 "H2": [str(h) for h in h2_grid]},
        "result": cert.to_dict(),
        "verdict": "all-negative" if cert.ok else "VIOLATED",
        "timestamp": _timestamp(),
    }
    write_json(cfg.get("json"), payload)
    return 0 if cert.ok else 1


# ----------------------------------------------------------------------
# isoparam
# ----------------------------------------------------------------------
def cmd_isoparam(args) -> int:
    cfg = load_config(args)
    name = cfg.get("example")
    if not name:
        raise ConfigError("isoparam requires --example")
    params = cfg.get("params")
    if isinstance(params, str) or params is None:
        params = parse_params(params)
    member = build_member(name, params)
    seed = int(cfg.get("seed", _default_seed()))
    n = int(cfg.get("points", 200))
    rng = geometry.rng_from_seed(seed)
    points = member.sample(n, rng)
    try:
        fit = isoparametric.profile_fit(member.conformal_factor,
                                        member.induced_chart, points)
    except BiconfError as err:
        raise ConfigError(str(err)) from err
    rows = [(repr(float(l)), repr(float(a)), repr(float(b)))
            for l, a, b in fit.samples]
    _write_csv(cfg.get("csv"), ISOPARAM_COLUMNS, rows)
    payload = {
        "command": "isoparam",
        "example": name,
        "params": {k: (list(v) if isinstance(v, tuple) else v)
                   for k, v in params.items()},
        "seed": seed,
        "points": n,
        "is_isoparametric": fit.is_isoparametric,
        "single_valuedness_deviation": fit.single_valuedness_deviation,
        "bin_width": fit.bin_width,
        "timestamp": _timestamp(),
    }
    write_json(cfg.get("json"), payload)
    return 0 if fit.is_isoparametric else 1


# ----------------------------------------------------------------------
# report
# ----------------------------------------------------------------------
def _claim_euclidean(seed: int, n: int) -> dict:
    details = []
    ok = True
    rng = geometry.rng_from_seed(seed)
    for m in (3, 4, 5, 6):
        roots = catalog.condition_roots("euclidean_graph", m)
        for t in roots:
            member = catalog.build_example("euclidean_graph", m=m, t=t)
            pts = member.sample(n, rng, generic=True)
            top = max(residuals.residual_general(member.immersion, p).max_norm
                      for p in pts)
            good = top < residuals.ZERO_THRESHOLD
            ok = ok and good
            details.append({"m": m, "t": t, "max_residual": top,
                            "expected": "zero", "ok": good})
        for t in (-1.0, 0.3, 2.0):
            if any(abs(t - r) < 1e-9 for r in roots):
                continue
            member = catalog.build_example("euclidean_graph", m=m, t=t)
            pts = member.sample(3, rng, generic=True)
            top = max(residuals.residual_general(member.immersion, p).max_norm
                      for p in pts)
            good = top > residuals.NONZERO_FLOOR
            ok = ok and good
            details.append({"m": m, "t": t, "max_residual": top,
                            "expected": "nonzero", "ok": good})
    return {"ok": ok, "details": details}


def _claim_hyperbolic(seed: int, n: int, grid_step: float = 0.05) -> dict:
    details = []
    ok = True
    rng = geometry.rng_from_seed(seed)
    for m, t in ((3, float(np.sqrt(3) - 1)), (3, float(-np.sqrt(3) - 1)),
                 (4, 1.0), (5, 2.0)):
        member = catalog.build_example("hyperbolic_slice", m=m, t=t)
        pts = member.sample(n, rng, generic=True)
        top = max(residuals.residual_general(member.immersion, p).max_norm
                  for p in pts)
        good = top < residuals.ZERO_THRESHOLD
        ok = ok and good
        details.append({"m": m, "t": t, "max_residual": top,
                        "expected": "zero", "ok": good})
    for m in (6, 7):
        disc = (m - 1) ** 2 - 4 * (m - 4) * (m - 1)
        no_roots = disc < 0
        grid = parse_range(f"-3:3:{grid_step}")
        worst = np.inf
        for t in grid:
            if abs(t) < 1e-12:
                continue  # constant factor: outside the root-condition scope
            member = catalog.build_example("hyperbolic_slice", m=m, t=float(t))
            p = member.sample(1, rng, generic=True)[0]
            worst = min(worst,
                        residuals.residual_general(member.immersion, p).max_norm)
        good = no_roots and worst > residuals.NONZERO_FLOOR
        ok = ok and good
        details.append({"m": m, "discriminant": disc,
                        "grid_step": grid_step,
                        "min_residual_on_grid": float(worst), "ok": good})
    return {"ok": ok, "details": details}


def _claim_sphere_equator(seed: int, n: int) -> dict:
    rng = geometry.rng_from_seed(seed)
    member = catalog.build_example("sphere_equator", m=4)
    pts = member.sample(max(n, 60), rng)
    fit = isoparametric.profile_fit(member.conformal_factor,
                                    member.induced_chart, pts)
    pf = member.profile
    profile_err = max(
        float(np.abs(fit.alpha - [pf.alpha(l) for l in fit.lam]).max()),
        float(np.abs(fit.beta - [pf.beta(l) for l in fit.lam]).max()))
    ode = max(abs(isoparametric.geodesic_ode_residual(
        4, 1.0, float(l), pf.alpha(l), pf.alpha_p(l), pf.beta(l),
        pf.beta_p(l))) for l in fit.lam)
    ok = fit.is_isoparametric and profile_err < 1e-8 and ode < 1e-10
    return {"ok": ok,
            "details": {"profile_error": profile_err, "ode_residual": ode,
                        "deviation": fit.single_valuedness_deviation}}


def _claim_sphere_umbilic(seed: int, n: int) -> dict:
    rng = geometry.rng_from_seed(seed)
    sols = umbilic.solve_umbilic_sphere()
    details = {"solutions": [s.to_dict() for s in sols]}
    ok = abs(sols[0].a - 0.866025403784) < 1e-9 and {s.b for s in sols} == {0.5, -0.5}
    residual_checks = []
    for s in sols:
        member = catalog.build_example("sphere_umbilic", m=4, a_radius=s.a,
                                       b_height=s.b)
        pts = member.sample(n, rng, generic=True)
        top = max(max(residuals.residual_general(member.immersion, p).max_norm,
                      residuals.residual_umbilic(member.immersion, p).max_norm)
                  for p in pts)
        good = top < residuals.ZERO_THRESHOLD
        ok = ok and good
        residual_checks.append({"b": s.b, "max_residual": top, "ok": good})
    off_checks = []
    for a in (0.6, 0.7, 0.8, 0.9):
        b = float(np.sqrt(1 - a * a))
        member = catalog.build_example("sphere_umbilic", m=4, a_radius=a,
                                       b_height=b)
        pts = member.sample(3, rng, generic=True)
        top = max(residuals.residual_general(member.immersion, p).max_norm
                  for p in pts)
        good = top > residuals.NONZERO_FLOOR
        ok = ok and good
        off_checks.append({"a": a, "max_residual": top, "ok": good})
    details["residuals"] = residual_checks
    details["off_solutions"] = off_checks
    return {"ok": ok, "details": details}


def _claim_certificates(m_max: int = 64) -> dict:
    cert = umbilic.sign_certificate(m_max)
    return {"ok": cert.ok,
            "details": {"m_range": list(cert.m_range),
                        "cells": len(cert.cells)}}


def _bochner_catalog_pairs():
    return [
        catalog.build_example("hyperbolic_slice", m=4, t=1.0),
        catalog.build_example("hyperbolic_slice", m=5, t=2.0),
        catalog.build_example("euclidean_graph", m=4, t=0.5),
        catalog.build_example("sphere_equator", m=4),
        catalog.build_example("sphere_umbilic", m=4,
                              a_radius=float(np.sqrt(3) / 2), b_height=0.5),
    ]


def _claim_bochner(seed: int, n: int) -> dict:
    rng = geometry.rng_from_seed(seed)
    details = []
    ok = True
    for member in _bochner_catalog_pairs():
        pts = member.sample(n, rng)
        worst_rel = 0.0
        worst_gap = np.inf
        for p in pts:
            rep = isoparametric.bochner_check(member.conformal_factor,
                                              member.induced_chart, p)
            worst_rel = max(worst_rel, rep.bochner_relative)
            worst_gap = min(worst_gap, rep.newton_gap)
        good = worst_rel < 1e-8 and worst_gap >= -1e-10
        ok = ok and good
        details.append({"example": member.name, "m": member.m,
                        "max_bochner_relative": worst_rel,
                        "min_newton_gap": float(worst_gap), "ok": good})
    return {"ok": ok, "details": details}


def _oracle_configs():
    sqrt3 = float(np.sqrt(3))
    return [
        ("euclidean_graph", {"m": 4, "t": 0.5}, True),
        ("euclidean_graph", {"m": 5, "t": -2.0}, True),
        ("euclidean_graph", {"m": 5, "t": 1.0}, False),
        ("hyperbolic_slice", {"m": 3, "t": sqrt3 - 1}, True),
        ("hyperbolic_slice", {"m": 4, "t": 1.0}, True),
        ("hyperbolic_slice", {"m": 5, "t": 2.0}, True),
        ("hyperbolic_slice", {"m": 5, "t": 0.7}, False),
        ("sphere_equator", {"m": 4}, True),
        ("sphere_umbilic", {"m": 4, "a_radius": sqrt3 / 2, "b_height": 0.5},
         True),
        ("sphere_umbilic", {"m": 4, "a_radius": sqrt3 / 2, "b_height": -0.5},
         True),
        ("sphere_umbilic", {"m": 4, "a_radius": 0.8, "b_height": 0.6}, False),
    ]


def _claim_oracle(seed: int, n: int) -> dict:
    rng = geometry.rng_from_seed(seed)
    details = []
    ok = True
    for name, params, is_solution in _oracle_configs():
        member = catalog.build_example(name, **params)
        pts = member.sample(n, rng, generic=True)
        gmax = max(residuals.residual_general(member.immersion, p).max_norm
                   for p in pts)
        omax = max(residuals.ambient_norm(
            member.immersion, p,
            residuals.bitension_oracle(member.immersion, p)) for p in pts)
        if is_solution:
            good = (gmax < residuals.ZERO_THRESHOLD
                    and omax < residuals.ORACLE_ZERO_THRESHOLD)
        else:
            good = (gmax > residuals.NONZERO_FLOOR
                    and omax > residuals.NONZERO_FLOOR)
        ok = ok and good
        details.append({"example": name, "params": params,
                        "expected": "zero" if is_solution else "nonzero",
                        "general_max": gmax, "oracle_max": omax, "ok": good})
    return {"ok": ok, "details": details}


def run_report(seed: int, points: int) -> dict:
    claims = {
        "euclidean_family": _claim_euclidean(seed, points),
        "hyperbolic_family": _claim_hyperbolic(seed, points),
        "sphere_equator": _claim_sphere_equator(seed, points),
        "sphere_umbilic_family": _claim_sphere_umbilic(seed, points),
        "umbilic_nonexistence_certificates": _claim_certificates(),
        "bochner_suite": _claim_bochner(seed, points),
        "oracle_equivalence": _claim_oracle(seed, points),
    }
    failing = sorted(k for k, v in claims.items() if not v["ok"])
    return {
        "command": "report",
        "seed": seed,
        "points": points,
        "backend": backend.backend_name(),
        "claims": claims,
        "verdict": "consistent" if not failing else "failed:" + ",".join(failing),
    }


def cmd_report(args) -> int:
    cfg = load_config(args)
    if args.inputs:
        runs = {}
        ok = True
        for path in args.inputs:
            try:
                data = json.loads(Path(path).read_text())
            except (OSError, json.JSONDecodeError) as err:
                raise ConfigError(f"cannot read report input {path}: {err}") from err
            data.pop("timestamp", None)
            runs[Path(path).name] = data
            verdict = str(data.get("verdict", ""))
            ok = ok and verdict in ("PASS", "consistent", "all-negative", "zero")
        payload = {
            "command": "report",
            "mode": "merge",
            "runs": runs,
            "verdict": "consistent" if ok else "inconsistent",
            "timestamp": _timestamp(),
        }
        write_json(cfg.get("out") or cfg.get("json"), payload)
        return 0 if ok else 1
    seed = int(cfg.get("seed", _default_seed()))
    points = int(cfg.get("points", 10))
    payload = run_report(seed, points)
    payload["timestamp"] = _timestamp()
    write_json(cfg.get("out") or cfg.get("json"), payload)
    return 0 if payload["verdict"] == "consistent" else 1


# ----------------------------------------------------------------------
# argument parsing
# ----------------------------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="biconf",
        description="verification runs for conformally biharmonic hypersurfaces")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--example", help="catalog example name")
        p.add_argument("--params", help="comma list k=v (m=4,t=0.5,...)")
        p.add_argument("--points", type=int, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--config", help="JSON config file; flags override")
        p.add_argument("--json", help="write the JSON report here")

    p = sub.add_parser("verify", help="general + reductions + oracle verdict")
    common(p)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("residual", help="evaluate one residual system")
    common(p)
    p.add_argument("--system", required=True,
                   help="|".join(residuals.SYSTEMS))
    p.set_defaults(fn=cmd_residual)

    p = sub.add_parser("sweep", help="parameter sweep to CSV")
    common(p)
    p.add_argument("--t-range", help="start:stop:step for the exponent t")
    p.add_argument("--m", type=int, help="dimension override")
    p.add_argument("--signs", action="store_true",
                   help="sweep the certificate grid instead of an example")
    p.add_argument("--m-range", help="lo:hi for --signs")
    p.add_argument("--csv", help="write the CSV table here")
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("signs", help="exact certificate grid to JSON")
    p.add_argument("--m-max", type=int, default=64)
    p.add_argument("--grid", help="c=0,-1;H2=0.25,1,4 (fractions allowed)")
    p.add_argument("--config", help="JSON config file; flags override")
    p.add_argument("--json", help="write the JSON report here")
    p.set_defaults(fn=cmd_signs)

    p = sub.add_parser("isoparam", help="profile fit to CSV + JSON verdict")
    common(p)
    p.add_argument("--csv", help="write the sample table here")
    p.set_defaults(fn=cmd_isoparam)

    p = sub.add_parser("report", help="run or merge the claim suites")
    common(p)
    p.add_argument("--out", help="write the consolidated JSON here")
    p.add_argument("--inputs", nargs="*", default=None,
                   help="merge these per-run JSON files instead of running")
    p.set_defaults(fn=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return 2 if err.code not in (0, None) else 0
    try:
        return args.fn(args)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return 2
    except BiconfError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


def entrypoint():  # console-script hook
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
