"""1-D contact-interaction gap equation: integral, root counting, curves.

The model replaces the 3-D dispersion by p^2 - mu_bar on the line and the
interaction by a delta potential of strength g, so the gap equation
collapses to the scalar condition (1/2 pi) int dp / K^Delta(p^2 - mu_bar)
= 1/g.  Depending on (delta_mu, T) this has zero, one or two solutions,
which is the mechanism probed by the solution-counting grid and the
T^i / T^g curves.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import List

import numpy as np
from scipy.optimize import brentq

from .core import DomainError, PhysParams, K_delta, b_of_c, _golden_min

log = logging.getLogger(__name__)

_ROOT_MERGE_REL = 1e-6       # roots closer than this (in mu units) merge
_SCAN_DECADES = (-8.0, 4.0)  # Delta scan range, powers of ten times mu
_SCAN_POINTS = 400


@lru_cache(maxsize=8)
def _gl_nodes(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def _composite_nodes(edges: np.ndarray, n: int = 16):
    """Gauss-Legendre nodes/weights on each panel of a sorted edge list."""
    x, w = _gl_nodes(n)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def _momentum_edges(params: PhysParams, Delta: float):
    """Panel edges in p, geometrically clustered at the Fermi point.

    The integrand varies on the scale T (in t = p^2 - mu units) around
    |p| = sqrt(mu), so panels shrink geometrically toward that point.  The
    cutoff window is 60 max(T, delta_mu) for the exponential corrections
    but 2000 Delta for the gap, because the tail formula drops the Delta^2
    term of the dispersion and that bias only falls off as (Delta/S)^2.
    """
    mu = params.mu_bar
    S = max(60.0 * params.T, 60.0 * params.delta_mu, 2000.0 * Delta)
    h = params.T
    dts = [0.0]
    step = h / 4.0
    while step < max(S, mu):
        dts.append(step)
        step *= 4.0
    dts.append(max(S, mu))
    dts = np.array(dts)
    upper = np.sqrt(mu + dts[dts <= S])
    if S not in dts:
        upper = np.append(upper, math.sqrt(mu + S))
    inner = dts[dts < mu * (1.0 - 1e-12)]
    lower = np.sqrt(mu - inner)
    edges = np.unique(np.concatenate(([0.0], lower, upper)))
    return edges, math.sqrt(mu + S)


def gap_integral_1d(Delta: float, params: PhysParams) -> float:
    """(1/2 pi) int_R dp / K^Delta(p^2 - mu_bar).

    Composite Gauss-Legendre quadrature up to the cutoff P, then the
    analytic tail (1/2 pi) int_{|p|>P} dp / (p^2 - mu); the kernel
    approaches p^2 - mu there, so the integral converges only through this
    1/p^2 decay and the tail must be added, not dropped.
    """
    if params.mu_bar <= 0:
        raise DomainError("gap_integral_1d needs mu_bar > 0")
    if params.T <= 0:
        raise DomainError("gap_integral_1d needs T > 0")
    if Delta < 0:
        raise DomainError("gap_integral_1d needs Delta >= 0")
    edges, P = _momentum_edges(params, Delta)
    p, w = _composite_nodes(edges)
    vals = 1.0 / K_delta(p * p - params.mu_bar, Delta, params)
    body = float(w @ vals) / math.pi
    rmu = math.sqrt(params.mu_bar)
    tail = math.log((P + rmu) / (P - rmu)) / (2.0 * math.pi * rmu)
    return body + tail


@dataclass(frozen=True)
class GapSolutionSet:
    """All positive gap-equation roots at one parameter point."""

    params: PhysParams
    roots: List[float] = field(default_factory=list)
    count: int = 0
    anomaly: bool = False    # count > 2, which the model should not produce


def _delta_scan_grid(params: PhysParams, n_log: int) -> np.ndarray:
    """Log-spaced Delta grid, refined linearly around the kernel plateau.

    For delta_mu/T above the monotonicity threshold the gap integral grows
    a bump centered near Delta = T b(c) whose width (of order T) can fall
    below the log-grid spacing, so that neighborhood gets its own linear
    patch.
    """
    mu = params.mu_bar
    grid = mu * np.logspace(*_SCAN_DECADES, n_log)
    b = b_of_c(params.c)
    if b > 0.0:
        center = params.T * b
        width = 12.0 * params.T
        patch = np.linspace(max(center - width, 0.0), center + width, 121)
        grid = np.concatenate((grid, patch[patch > 0.0]))
    return np.unique(grid)


def solve_gap_1d(params: PhysParams) -> GapSolutionSet:
    """All Delta > 0 with gap_integral_1d(Delta) = 1/g, sorted ascending.

    Log-spaced scan over Delta in 10^[-8, 4] mu plus bisection on every
    sign-change bracket; near-coincident roots (tangency) merge.
    """
    mu = params.mu_bar
    target = 1.0 / params.coupling
    grid = _delta_scan_grid(params, _SCAN_POINTS)
    vals = np.array([gap_integral_1d(d, params) - target for d in grid])
    roots = []
    for k in np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]:
        r = brentq(lambda d: gap_integral_1d(d, params) - target,
                   grid[k], grid[k + 1], xtol=1e-14 * mu, rtol=8.9e-16)
        roots.append(float(r))
    exact = np.nonzero(vals == 0.0)[0]
    roots.extend(float(grid[k]) for k in exact)
    roots.sort()
    merged = []
    for r in roots:
        if merged and r - merged[-1] < _ROOT_MERGE_REL * mu:
            continue
        merged.append(r)
    anomaly = len(merged) > 2
    if anomaly:
        log.warning("gap equation returned %d roots at %s", len(merged), params)
    return GapSolutionSet(params=params, roots=merged, count=len(merged),
                          anomaly=anomaly)


def max_gap_integral_1d(params: PhysParams, refine: bool = True):
    """max over Delta >= 0 of gap_integral_1d, with the maximizer.

    Coarse log scan plus golden-section refinement; Delta = 0 competes as a
    boundary candidate.
    """
    mu = params.mu_bar
    grid = np.concatenate(([0.0], _delta_scan_grid(params, 120)))
    vals = np.array([gap_integral_1d(d, params) for d in grid])
    k = int(np.argmax(vals))
    if not refine or k == 0 or k == len(grid) - 1:
        return float(grid[k]), float(vals[k])
    d_star, neg = _golden_min(lambda d: -gap_integral_1d(d, params),
                              grid[k - 1], grid[k + 1], xtol=1e-12 * mu)
    if -neg >= vals[k]:
        return float(d_star), float(-neg)
    return float(grid[k]), float(vals[k])


@dataclass(frozen=True)
class Curve1D:
    """A critical curve of the 1-D model in the (delta_mu, T) plane."""

    kind: str                         # 'i' or 'g'
    delta_mu: np.ndarray              # points where a temperature was found
    T: np.ndarray
    extra_roots: dict = field(default_factory=dict)   # dmu -> smaller T roots
    failed: List[float] = field(default_factory=list)  # dmu with no bracket


def _curve_value(dmu: float, T: float, g: float, mu: float, kind: str) -> float:
    params = PhysParams(mu_bar=mu, delta_mu=dmu, T=T, coupling=g)
    if kind == "i":
        return gap_integral_1d(0.0, params) - 1.0 / g
    return max_gap_integral_1d(params, refine=False)[1] - 1.0 / g


def curve_1d(g: float, mu: float, delta_grid, kind: str,
             n_scan: int = 80) -> Curve1D:
    """Solve the implicit equation in T for each delta_mu on the grid.

    Monotonicity in T is not assumed: all sign-change brackets on an
    80-point log scan are bisected and the largest root is the curve point;
    additional roots are recorded.
    """
    if kind not in ("i", "g"):
        raise DomainError(f"curve kind must be 'i' or 'g', got {kind!r}")
    if g <= 0 or mu <= 0:
        raise DomainError("curve_1d needs g > 0 and mu > 0")
    delta_grid = np.asarray(delta_grid, dtype=float)
    Ts = mu * np.logspace(-14.0, 0.0, n_scan)
    out_d, out_t = [], []
    extra, failed = {}, []
    for dmu in delta_grid:
        vals = np.array([_curve_value(dmu, T, g, mu, kind) for T in Ts])
        roots = []
        for k in np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]:
            r = brentq(lambda T: _curve_value(dmu, T, g, mu, kind),
                       Ts[k], Ts[k + 1], xtol=1e-300, rtol=8.9e-16)
            roots.append(float(r))
        if not roots:
            failed.append(float(dmu))
            log.info("curve_1d(%s): no temperature bracket at delta_mu=%g",
                     kind, dmu)
            continue
        roots.sort()
        out_d.append(float(dmu))
        out_t.append(roots[-1])
        if len(roots) > 1:
            extra[float(dmu)] = roots[:-1]
            log.info("curve_1d(%s): %d roots at delta_mu=%g, keeping largest",
                     kind, len(roots), dmu)
    return Curve1D(kind=kind, delta_mu=np.array(out_d), T=np.array(out_t),
                   extra_roots=extra, failed=failed)
