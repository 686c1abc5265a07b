"""Command-line front end: config parsing, dispatch, CSV/JSON artifacts.

Subcommands: kappa, curves, m-check, toy1d, spectrum, phase.  Options come
from a flat key=value config file overridden by flags; every output file
starts with '#'-prefixed metadata lines (command, version, config hash) so
runs are self-describing and byte-reproducible.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import __version__
from .core import DomainError, PhysParams
from .kappa import kappa_g, kappa_i, kappa_o
from .mlimits import m_asymptotic, m_bar_numeric, m_numeric, m_tilde_numeric
from .spectral import (BUILTIN_POTENTIALS, critical_curve, rho_lambda,
                       critical_temperature_balanced, v_mu_spectrum,
                       w_mu_form_constant)
from .toy1d import curve_1d, solve_gap_1d
from .functional import phase_report

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


class ConfigError(ValueError):
    """Invalid run configuration (missing/out-of-range keys, bad grids)."""


# ---------------------------------------------------------------------------
# config plumbing

def parse_config_file(path: str) -> Dict[str, str]:
    """Flat key=value lines; blank lines and '#' comments ignored."""
    out: Dict[str, str] = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{lineno}: expected key=value")
                key, val = line.split("=", 1)
                out[key.strip()] = val.strip()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}")
    return out


def parse_grid(spec: str, name: str) -> np.ndarray:
    """'min:max:count' or 'min:max:count:log' -> grid array, count >= 2."""
    parts = spec.split(":")
    if len(parts) not in (3, 4):
        raise ConfigError(f"{name}: expected min:max:count[:log], got {spec!r}")
    try:
        lo, hi = float(parts[0]), float(parts[1])
        count = int(parts[2])
    except ValueError:
        raise ConfigError(f"{name}: non-numeric grid spec {spec!r}")
    if count < 2:
        raise ConfigError(f"{name}: grid count must be >= 2, got {count}")
    if len(parts) == 4:
        if parts[3] != "log":
            raise ConfigError(f"{name}: unknown grid scale {parts[3]!r}")
        if lo <= 0 or hi <= 0:
            raise ConfigError(f"{name}: log grid needs positive endpoints")
        return np.logspace(math.log10(lo), math.log10(hi), count)
    return np.linspace(lo, hi, count)


def _merge(args: argparse.Namespace, keys: Sequence[str]) -> Dict[str, str]:
    """Config-file keys with flag overrides; flags win when not None."""
    cfg: Dict[str, str] = {}
    if getattr(args, "config", None):
        cfg.update(parse_config_file(args.config))
    for key in keys:
        attr = key.replace("-", "_")
        val = getattr(args, attr, None)
        if val is not None:
            cfg[key] = str(val)
    return cfg


def _require(cfg: Dict[str, str], key: str) -> str:
    if key not in cfg:
        raise ConfigError(f"missing required option {key!r}")
    return cfg[key]


def _as_float(cfg: Dict[str, str], key: str, default: Optional[float] = None) -> float:
    if key not in cfg:
        if default is None:
            raise ConfigError(f"missing required option {key!r}")
        return default
    try:
        return float(cfg[key])
    except ValueError:
        raise ConfigError(f"option {key!r} must be a number, got {cfg[key]!r}")


def _as_int(cfg: Dict[str, str], key: str, default: Optional[int] = None) -> int:
    if key not in cfg:
        if default is None:
            raise ConfigError(f"missing required option {key!r}")
        return default
    try:
        return int(cfg[key])
    except ValueError:
        raise ConfigError(f"option {key!r} must be an integer, got {cfg[key]!r}")


def _validate_tolerances(cfg: Dict[str, str]):
    for key in ("quad_tol", "root_tol"):
        if key in cfg:
            tol = _as_float(cfg, key)
            if not 0.0 < tol <= 1e-2:
                raise ConfigError(f"{key} must lie in (0, 1e-2], got {tol}")


def config_hash(cfg: Dict[str, str]) -> str:
    canon = "\n".join(f"{k}={cfg[k]}" for k in sorted(cfg))
    return hashlib.sha256(canon.encode()).hexdigest()[:12]


def _potential_from_config(cfg: Dict[str, str]):
    name = cfg.get("potential", "gaussian")
    if name not in BUILTIN_POTENTIALS:
        raise ConfigError(f"unknown potential {name!r}; choose from "
                          f"{sorted(BUILTIN_POTENTIALS)}")
    depth = _as_float(cfg, "depth", -1.0)
    width = _as_float(cfg, "width", 1.0)
    return BUILTIN_POTENTIALS[name](depth, width)


def _jobs(args: argparse.Namespace) -> int:
    if getattr(args, "jobs", None):
        return max(1, int(args.jobs))
    env = os.environ.get("POLARFERMI_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"POLARFERMI_JOBS must be an integer, got {env!r}")
    return os.cpu_count() or 1


def _pmap(fn, items, jobs: int) -> List:
    """Ordered map, optionally over a process pool."""
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=min(jobs, len(items))) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# output writers

def _fmt(value) -> str:
    if isinstance(value, float):
        return "%.17g" % value
    return str(value)


def write_table(path: str, command: str, cfg: Dict[str, str],
                columns: Sequence[str], rows: Sequence[Sequence],
                scalars: Optional[Dict[str, float]] = None,
                fmt: str = "csv"):
    scalars = scalars or {}
    if fmt == "json":
        doc = {"command": command, "version": __version__,
               "config_hash": config_hash(cfg), "columns": list(columns),
               "rows": [list(r) for r in rows], "scalars": scalars}
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(doc, fh, indent=1, sort_keys=True)
            fh.write("\n")
        return
    if fmt != "csv":
        raise ConfigError(f"unknown output format {fmt!r}")
    lines = [f"# command={command}",
             f"# version={__version__}",
             f"# config_hash={config_hash(cfg)}"]
    for key in sorted(scalars):
        lines.append(f"# {key}={_fmt(scalars[key])}")
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# subcommand workers (module level so they pickle for the process pool)

def _kappa_row(t: float) -> Tuple[float, float, float, float, float]:
    kg = kappa_g(t)
    return (t, kappa_i(t), kappa_o(t), kg.value, kg.minimizer_d)


def _mcheck_row(item) -> Tuple[str, float, float, float, float, float]:
    kind, T, t, mu = item
    params = PhysParams(mu_bar=mu, delta_mu=t * T, T=T)
    num = {"plain": m_numeric, "tilde": m_tilde_numeric,
           "bar": m_bar_numeric}[kind](params).value
    asym = m_asymptotic(T, t, mu, kind)
    return (kind, T, t, num, asym, num - asym)


def _toy1d_row(item) -> Tuple[float, float, int, float, float, bool]:
    dmu, T, mu, g = item
    sols = solve_gap_1d(PhysParams(mu_bar=mu, delta_mu=dmu, T=T, coupling=g))
    r1 = sols.roots[0] if sols.count >= 1 else float("nan")
    r2 = sols.roots[1] if sols.count >= 2 else float("nan")
    return (dmu, T, sols.count, r1, r2, sols.anomaly)


def _phase_row(item) -> Tuple[float, float, str, float, float]:
    dmu, T, mu, g = item
    rep = phase_report(PhysParams(mu_bar=mu, delta_mu=dmu, T=T, coupling=g))
    return (dmu, T, rep.label, rep.f_normal, rep.f_best)


# ---------------------------------------------------------------------------
# subcommand entry points

def _cmd_kappa(args) -> int:
    cfg = _merge(args, ("t-grid",))
    _validate_tolerances(cfg)
    grid = parse_grid(_require(cfg, "t-grid"), "t-grid")
    rows = _pmap(_kappa_row, grid, _jobs(args))
    write_table(args.out, "kappa", cfg,
                ("t", "kappa_i", "kappa_o", "kappa_g", "d_star"),
                rows, fmt=args.format)
    return EXIT_OK


def _cmd_curves(args) -> int:
    cfg = _merge(args, ("t-grid", "mu_bar", "lambda", "potential",
                        "depth", "width", "kinds"))
    _validate_tolerances(cfg)
    grid = parse_grid(_require(cfg, "t-grid"), "t-grid")
    mu = _as_float(cfg, "mu_bar", 1.0)
    lam = _as_float(cfg, "lambda")
    kinds = cfg.get("kinds", "i,o,g").split(",")
    for k in kinds:
        if k not in ("i", "o", "g"):
            raise ConfigError(f"unknown curve kind {k!r}")
    V = _potential_from_config(cfg)
    rows = []
    t_c = None
    for kind in kinds:
        curve = critical_curve(V, mu, lam, kind, grid)
        t_c = curve.T_c
        for t, x, y in zip(curve.t, curve.dmu_over_tc, curve.T_over_tc):
            rows.append((kind, float(t), float(x), float(y)))
    write_table(args.out, "curves", cfg,
                ("kind", "t", "dmu_over_tc", "T_over_tc"), rows,
                scalars={"T_c": t_c}, fmt=args.format)
    return EXIT_OK


def _cmd_mcheck(args) -> int:
    cfg = _merge(args, ("t-grid", "T-grid", "mu_bar", "kinds"))
    _validate_tolerances(cfg)
    t_grid = parse_grid(_require(cfg, "t-grid"), "t-grid")
    T_grid = parse_grid(_require(cfg, "T-grid"), "T-grid")
    mu = _as_float(cfg, "mu_bar", 1.0)
    kinds = cfg.get("kinds", "plain,tilde,bar").split(",")
    for k in kinds:
        if k not in ("plain", "tilde", "bar"):
            raise ConfigError(f"unknown m kind {k!r}")
    items = [(k, float(T), float(t), mu)
             for k in kinds for T in T_grid for t in t_grid]
    rows = _pmap(_mcheck_row, items, _jobs(args))
    write_table(args.out, "m-check", cfg,
                ("kind", "T", "t", "numeric", "asymptotic", "difference"),
                rows, fmt=args.format)
    return EXIT_OK


def _cmd_toy1d(args) -> int:
    cfg = _merge(args, ("dmu-grid", "T-grid", "mu_bar", "g", "curve-kinds"))
    _validate_tolerances(cfg)
    dmu_grid = parse_grid(_require(cfg, "dmu-grid"), "dmu-grid")
    T_grid = parse_grid(_require(cfg, "T-grid"), "T-grid")
    mu = _as_float(cfg, "mu_bar", 1.0)
    g = _as_float(cfg, "g")
    items = [(float(d), float(T), mu, g) for d in dmu_grid for T in T_grid]
    rows = _pmap(_toy1d_row, items, _jobs(args))
    if any(r[5] for r in rows):
        bad = [r for r in rows if r[5]][0]
        print(f"toy1d: anomalous root count at delta_mu={bad[0]} T={bad[1]}",
              file=sys.stderr)
        return EXIT_NUMERICAL
    write_table(args.out, "toy1d", cfg,
                ("delta_mu", "T", "count", "root1", "root2"),
                [r[:5] for r in rows], fmt=args.format)
    for kind in [k for k in cfg.get("curve-kinds", "").split(",") if k]:
        curve = curve_1d(g, mu, dmu_grid, kind)
        base, ext = os.path.splitext(args.out)
        write_table(f"{base}.curve_{kind}{ext}", "toy1d-curve", cfg,
                    ("kind", "delta_mu", "T"),
                    [(kind, float(d), float(T))
                     for d, T in zip(curve.delta_mu, curve.T)],
                    fmt=args.format)
    return EXIT_OK


def _cmd_spectrum(args) -> int:
    cfg = _merge(args, ("mu_bar", "lambda", "potential", "depth", "width",
                        "ell_max"))
    _validate_tolerances(cfg)
    mu = _as_float(cfg, "mu_bar", 1.0)
    lam = _as_float(cfg, "lambda")
    ell_max = _as_int(cfg, "ell_max", 60)
    V = _potential_from_config(cfg)
    spec = v_mu_spectrum(V, mu, ell_max)
    w_form = w_mu_form_constant(V, mu)
    rho = rho_lambda(V, mu, lam, ell_max)
    t_c = critical_temperature_balanced(mu, rho)
    rows = [(ell, float(e)) for ell, e in enumerate(spec.e_ell)]
    scalars = {"e_mu": spec.e_mu,
               "trace_partial": spec.trace_partial,
               "trace_exact": spec.trace_exact,
               "trace_rel_err": abs(spec.trace_partial - spec.trace_exact)
               / abs(spec.trace_exact),
               "w_form": w_form, "rho": rho, "T_c": t_c}
    write_table(args.out, "spectrum", cfg, ("ell", "e_ell"), rows,
                scalars=scalars, fmt=args.format)
    return EXIT_OK


def _cmd_phase(args) -> int:
    cfg = _merge(args, ("dmu-grid", "T-grid", "mu_bar", "g"))
    _validate_tolerances(cfg)
    dmu_grid = parse_grid(_require(cfg, "dmu-grid"), "dmu-grid")
    T_grid = parse_grid(_require(cfg, "T-grid"), "T-grid")
    mu = _as_float(cfg, "mu_bar", 1.0)
    g = _as_float(cfg, "g")
    items = [(float(d), float(T), mu, g) for d in dmu_grid for T in T_grid]
    rows = _pmap(_phase_row, items, _jobs(args))
    write_table(args.out, "phase", cfg,
                ("delta_mu", "T", "label", "F_normal", "F_best"),
                rows, fmt=args.format)
    return EXIT_OK


_COMMANDS = {
    "kappa": _cmd_kappa,
    "curves": _cmd_curves,
    "m-check": _cmd_mcheck,
    "toy1d": _cmd_toy1d,
    "spectrum": _cmd_spectrum,
    "phase": _cmd_phase,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polarfermi",
        description="Phase-diagram computations for the imbalanced BCS gas")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="flat key=value config file")
        p.add_argument("--out", required=True, help="output file path")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--jobs", type=int,
                       help="worker processes (default: POLARFERMI_JOBS or "
                            "CPU count)")

    p = sub.add_parser("kappa", help="table of the three kappa functions")
    common(p)
    p.add_argument("--t-grid", help="min:max:count[:log]")

    p = sub.add_parser("curves", help="weak-coupling critical curves")
    common(p)
    p.add_argument("--t-grid", help="min:max:count[:log]")
    p.add_argument("--mu_bar", type=float)
    p.add_argument("--lambda", dest="lambda_", type=float)
    p.add_argument("--potential", choices=sorted(BUILTIN_POTENTIALS))
    p.add_argument("--depth", type=float)
    p.add_argument("--width", type=float)
    p.add_argument("--kinds", help="comma list from i,o,g")

    p = sub.add_parser("m-check", help="m integrals vs asymptotics")
    common(p)
    p.add_argument("--t-grid", help="min:max:count[:log]")
    p.add_argument("--T-grid", help="min:max:count[:log]")
    p.add_argument("--mu_bar", type=float)
    p.add_argument("--kinds", help="comma list from plain,tilde,bar")

    p = sub.add_parser("toy1d", help="1-D gap-equation root counting")
    common(p)
    p.add_argument("--dmu-grid", help="min:max:count[:log]")
    p.add_argument("--T-grid", help="min:max:count[:log]")
    p.add_argument("--mu_bar", type=float)
    p.add_argument("--g", type=float)
    p.add_argument("--curve-kinds", help="comma list from i,g")

    p = sub.add_parser("spectrum", help="Fermi-sphere channel spectrum")
    common(p)
    p.add_argument("--mu_bar", type=float)
    p.add_argument("--lambda", dest="lambda_", type=float)
    p.add_argument("--potential", choices=sorted(BUILTIN_POTENTIALS))
    p.add_argument("--depth", type=float)
    p.add_argument("--width", type=float)
    p.add_argument("--ell_max", type=int)

    p = sub.add_parser("phase", help="normal/superfluid decision grid")
    common(p)
    p.add_argument("--dmu-grid", help="min:max:count[:log]")
    p.add_argument("--T-grid", help="min:max:count[:log]")
    p.add_argument("--mu_bar", type=float)
    p.add_argument("--g", type=float)

    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    # argparse stores --lambda as lambda_; expose it under the config key
    if hasattr(args, "lambda_"):
        setattr(args, "lambda", args.lambda_)
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DomainError as exc:
        print(f"numerical failure in {args.command}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
