"""The three universal phase-boundary functions kappa_i, kappa_o, kappa_g.

All three are dimensionless functions of the ratio t = delta_mu / T and give
the critical-temperature curves as T = T_c * exp(-kappa(t)) in the
weak-coupling limit.  kappa_i comes from the monotone kernel K^0, kappa_o
from its pointwise infimum K_tilde, and kappa_g from the best single gap
amplitude (an infimum over the auxiliary variable d).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .core import COSH_THRESHOLD, DomainError, b_of_c, f_val, _golden_min

EULER_GAMMA = float(np.euler_gamma)
_LN_PI_2 = math.log(math.pi / 2.0)
_QUAD_OPTS = dict(epsabs=1e-12, epsrel=1e-11, limit=300)


@dataclass(frozen=True)
class KappaValue:
    """A kappa evaluation; minimizer_d is meaningful for kind 'g' only."""

    t: float
    kind: str           # 'i', 'o' or 'g'
    value: float
    minimizer_d: float = 0.0


def _fermi(u):
    """1 / (1 + e^u), overflow-safe for large |u|."""
    u = np.asarray(u, dtype=float)
    out = np.where(u > 0,
                   np.exp(-np.clip(u, 0, None)) / (1.0 + np.exp(-np.clip(u, 0, None))),
                   1.0 / (1.0 + np.exp(np.clip(u, None, 0))))
    if out.ndim == 0:
        return float(out)
    return out


def _em1r(x):
    """(1 - e^{-x}) / x with a series branch near 0."""
    x = np.asarray(x, dtype=float)
    small = x < 1e-4
    xs = np.where(small, 1.0, x)
    out = np.where(small, 1.0 - x / 2.0 + x * x / 6.0, -np.expm1(-xs) / xs)
    if out.ndim == 0:
        return float(out)
    return out


def kappa_i(t: float) -> float:
    """Inner-curve kappa: two weighted Fermi-tail integrals minus ln(pi/2)."""
    if t < 0:
        raise DomainError("kappa_i needs t >= 0")
    x_max = max(60.0, t + 60.0)
    i_plus, _ = quad(lambda x: _em1r(x) * _fermi(x + t), 0.0, x_max, **_QUAD_OPTS)
    pts = [t] if 0.0 < t < x_max else None
    i_minus, _ = quad(lambda x: _em1r(x) * _fermi(x - t), 0.0, x_max,
                      points=pts, **_QUAD_OPTS)
    return _fermi(t) * i_plus + _fermi(-t) * i_minus - _LN_PI_2


def kappa_o(c: float) -> float:
    """Outer-curve kappa; reduces to kappa_i wherever b(c) = 0."""
    if c < 0:
        raise DomainError("kappa_o needs c >= 0")
    b = b_of_c(c)
    if b == 0.0:
        return kappa_i(c)
    x_max = max(60.0, c + 60.0)
    i_plus, _ = quad(lambda x: _em1r(x) * _fermi(x + c), b, x_max, **_QUAD_OPTS)
    pts = [c] if b < c < x_max else None
    i_minus, _ = quad(lambda x: _em1r(x) * _fermi(x - c), b, x_max,
                      points=pts, **_QUAD_OPTS)
    # log-singular integral of ln(x) e^{-x} over [0, b] via x = e^s
    log_int, _ = quad(lambda s: s * math.exp(s - math.exp(s)),
                      math.log(b) - 60.0, math.log(b), **_QUAD_OPTS)
    return (_fermi(c) * i_plus + _fermi(-c) * i_minus
            + (-math.expm1(-b)) * math.log(b)
            - log_int
            - b / (2.0 * f_val(b, c))
            - _LN_PI_2)


def zeta(t: float, d: float) -> float:
    """The four-integral function whose d-infimum is kappa_g(t).

    The 1/sqrt(x^2 - d^2) endpoint singularity is removed exactly by the
    substitution x = d*cosh(u).  For d below 1e-8 the d -> 0 limit form is
    used (the first integral vanishes, the second contributes ln 2).
    """
    if t < 0 or d < 0:
        raise DomainError("zeta needs t >= 0 and d >= 0")
    x_max = max(60.0, d + 60.0, t + 60.0)
    if d < 1e-8:
        # limit form; the explicit ln 2 reconciles -ln(pi) with -ln(pi/2)
        c_plus, _ = quad(lambda x: _em1r(x) * _fermi(x + t), 0.0, x_max, **_QUAD_OPTS)
        pts = [t] if 0.0 < t < x_max else None
        c_minus, _ = quad(lambda x: _em1r(x) * _fermi(x - t), 0.0, x_max,
                          points=pts, **_QUAD_OPTS)
        return (math.log(2.0) + _fermi(t) * c_plus + _fermi(-t) * c_minus
                - math.log(math.pi))

    # -int_0^d e^{-x} ln(x/d) dx via x = d e^s
    a_int, _ = quad(lambda s: -math.exp(-d * math.exp(s)) * s * d * math.exp(s),
                    -60.0, 0.0, **_QUAD_OPTS)

    u_max = math.acosh(x_max / d)

    def _b_int(u):
        return math.exp(-d * math.cosh(u)) * math.log1p(math.tanh(u)) * d * math.sinh(u)

    b_int, _ = quad(_b_int, 0.0, u_max, **_QUAD_OPTS)

    def _tail(u, sign):
        x = d * math.cosh(u)
        return -math.expm1(-x) * _fermi(x + sign * t)

    pts = [math.acosh(t / d)] if t > d and t < x_max else None
    c_plus, _ = quad(_tail, 0.0, u_max, args=(+1.0,), **_QUAD_OPTS)
    c_minus, _ = quad(_tail, 0.0, u_max, args=(-1.0,), points=pts, **_QUAD_OPTS)
    return (a_int + b_int + _fermi(t) * c_plus + _fermi(-t) * c_minus
            - math.log(math.pi))


def kappa_g(t: float) -> KappaValue:
    """min over d >= 0 of zeta(t, d), boundary d = 0 (= kappa_i) included."""
    if t < 0:
        raise DomainError("kappa_g needs t >= 0")
    boundary = kappa_i(t)
    d_grid = np.logspace(-3.0, 1.5, 60)
    vals = np.array([zeta(t, d) for d in d_grid])
    k = int(np.argmin(vals))
    lo = d_grid[max(k - 1, 0)]
    hi = d_grid[min(k + 1, len(d_grid) - 1)]
    d_star, v_star = _golden_min(lambda d: zeta(t, d), lo, hi, xtol=1e-9)
    if v_star < boundary:
        return KappaValue(t=t, kind="g", value=float(v_star),
                          minimizer_d=float(d_star))
    return KappaValue(t=t, kind="g", value=float(boundary), minimizer_d=0.0)


def kappa(kind: str, t: float) -> float:
    """Uniform scalar access to the three kappa functions."""
    if kind == "i":
        return kappa_i(t)
    if kind == "o":
        return kappa_o(t)
    if kind == "g":
        return kappa_g(t).value
    raise DomainError(f"unknown kappa kind {kind!r}")
