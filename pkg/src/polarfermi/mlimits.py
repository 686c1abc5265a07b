"""Finite-(T, delta_mu) integrals m, m_tilde, m_bar and their T -> 0 asymptotics.

The three integrals share one reduction: the 3-D momentum integral of
(1/K - 1/p^2) splits at p^2 = mu_bar and, after the variable change
p^2 - mu_bar -> -t / t, becomes four 1-D pieces whose singular parts cancel
in pairs.  The log-divergent piece is evaluated separately in units of T.
They converge, as (T, delta_mu) -> 0 at fixed t = delta_mu/T, to
mu_bar^{-1/2} (ln(mu_bar/T) + gamma - 2 + ln(8/pi) - kappa^{kind}(t)),
which is the central cross-validation between quadrature and the kappa
module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .core import DomainError, PhysParams, b_of_c, f_val, _golden_min
from .kappa import EULER_GAMMA, kappa

_QUAD = dict(epsabs=1e-11, epsrel=1e-11, limit=400)


@dataclass(frozen=True)
class MResult:
    kind: str        # 'plain', 'tilde' or 'bar'
    value: float     # inverse-sqrt-energy units
    y_star: float = 0.0


def _upsilon_y(t, y, params):
    """Fermi weight evaluated at the quasiparticle energy sqrt(t^2 + y^2)."""
    e = np.hypot(t, y)
    two_t = 2.0 * params.T
    return 0.5 * (np.tanh((e + params.delta_mu) / two_t)
                  + np.tanh((e - params.delta_mu) / two_t))


def _g2_over_t(t, mu):
    """(sqrt(mu+t) + sqrt(mu-t) - 2 sqrt(mu)) / t with a series branch.

    The direct form loses all digits for t << mu, so below t/mu = 1e-3 a
    two-term Taylor series in t/mu is used instead.
    """
    t = np.asarray(t, dtype=float)
    x = t / mu
    small = np.abs(x) < 1e-3
    ts = np.where(small, mu, t)
    direct = (np.sqrt(mu + ts) + np.sqrt(mu - ts) - 2.0 * math.sqrt(mu)) / ts
    series = (-x / 4.0 - 5.0 * x ** 3 / 64.0) / math.sqrt(mu)
    out = np.where(small, series, direct)
    if out.ndim == 0:
        return float(out)
    return out


def _tail_above(mu, X):
    """Analytic tail of the first piece: int_X^inf mu dt / (t sqrt(mu+t))."""
    u = math.sqrt(mu + X)
    rmu = math.sqrt(mu)
    return rmu * math.log((u + rmu) / (u - rmu))


def _i_of_y(params: PhysParams, y: float, t_lower: float = 0.0) -> float:
    """The reduced integral I(delta_mu, T, y), with optional lower cutoff.

    y = 0, t_lower = 0 gives m; y = 0, t_lower = T*b gives the non-plateau
    part of m_tilde; y > 0 gives the candidates maximized over in m_bar.
    """
    mu, T = params.mu_bar, params.T
    c = params.c
    d = y / T
    rmu = math.sqrt(mu)

    # piece 1: [mu, inf), no singularity, analytic tail beyond X
    X = 60.0 * max(T + params.delta_mu + y, mu)

    def p1(t):
        return (_upsilon_y(t, y, params) * math.sqrt((mu + t) / (t * t + y * y))
                - 1.0 / math.sqrt(mu + t))

    i1, _ = quad(p1, mu, X, **_QUAD)
    i1 += _tail_above(mu, X)

    # piece 2: [t_lower, mu], smooth after the series-stable difference
    layer = min(mu / 2.0, T * (c + d + 60.0))
    pts = [p for p in (layer / 4.0, layer) if t_lower < p < mu]

    def p2(t):
        e = math.hypot(t, y)
        if e == 0.0:
            return 0.0
        return _upsilon_y(t, y, params) / e * _g2_over_t(t, mu) * t

    i2, _ = quad(p2, t_lower, mu, points=pts or None, **_QUAD)

    # piece 3: analytic
    a = t_lower
    i3 = -(2.0 * math.sqrt(2.0 * mu) - 2.0 * math.sqrt(mu + a)
           + 2.0 * math.sqrt(mu - a)) / (2.0 * mu)

    # piece 4: log-divergent piece in units of T, with an exact log remainder
    x_lo = t_lower / T
    x_cap = mu / T
    x0 = min(c + d + 60.0, x_cap)

    def p4(x):
        e = math.hypot(x, d)
        ups = 0.5 * (math.tanh((e + c) / 2.0) + math.tanh((e - c) / 2.0))
        if e < 1e-8:
            # Upsilon(e)/e limit = 1 / (2 cosh^2(c/2)) -> over sqrt(x^2+d^2)
            return 0.5 / math.cosh(c / 2.0) ** 2
        return ups / e

    i4, _ = quad(p4, x_lo, x0, points=[min(c + d + 2.0, x0)], **_QUAD)
    if x0 < x_cap:
        if d > 0:
            i4 += math.log((x_cap + math.hypot(x_cap, d))
                           / (x0 + math.hypot(x0, d)))
        else:
            i4 += math.log(x_cap / x0)

    return (i1 + i2) / (2.0 * mu) + i3 + i4 / rmu


def _check(params: PhysParams):
    if params.mu_bar <= 0:
        raise DomainError("m integrals need mu_bar > 0")
    if params.T <= 0:
        raise DomainError("m integrals need T > 0")


def m_numeric(params: PhysParams) -> MResult:
    """(1/4 pi mu_bar) int (1/K^0 - 1/p^2) d^3p via the reduced 1-D form."""
    _check(params)
    return MResult(kind="plain", value=_i_of_y(params, 0.0))


def m_tilde_numeric(params: PhysParams) -> MResult:
    """Same integral with K_tilde: plateau piece plus cut-off reduced form."""
    _check(params)
    c = params.c
    b = b_of_c(c)
    if b == 0.0:
        return MResult(kind="tilde", value=_i_of_y(params, 0.0))
    mu, T = params.mu_bar, params.T
    a = T * b
    if a >= mu:
        raise DomainError("plateau T*b(c) exceeds mu_bar; outside validity")
    fb = f_val(b, c)
    p_plus = math.sqrt(mu + a)
    p_minus = math.sqrt(mu - a)
    plateau = ((p_plus ** 3 - p_minus ** 3) / (6.0 * T * fb)
               - (p_plus - p_minus)) / mu
    return MResult(kind="tilde", value=plateau + _i_of_y(params, 0.0, t_lower=a))


def m_bar_numeric(params: PhysParams) -> MResult:
    """max over y >= 0 of I(delta_mu, T, y), with the maximizing y."""
    _check(params)
    y_hi = 10.0 * (params.delta_mu + params.T)
    ys = np.linspace(0.0, y_hi, 40)
    vals = np.array([_i_of_y(params, y) for y in ys])
    k = int(np.argmax(vals))
    if k == 0:
        return MResult(kind="bar", value=float(vals[0]), y_star=0.0)
    lo = ys[max(k - 1, 0)]
    hi = ys[min(k + 1, len(ys) - 1)]
    y_star, neg = _golden_min(lambda y: -_i_of_y(params, y), lo, hi,
                              xtol=1e-10 * max(params.T, 1.0))
    if -neg <= vals[0]:
        return MResult(kind="bar", value=float(vals[0]), y_star=0.0)
    return MResult(kind="bar", value=float(-neg), y_star=float(y_star))


_KIND_TO_KAPPA = {"plain": "i", "tilde": "o", "bar": "g", "i": "i", "o": "o", "g": "g"}


def m_asymptotic(T: float, t: float, mu_bar: float, kind: str) -> float:
    """mu^{-1/2} (ln(mu/T) + gamma - 2 + ln(8/pi) - kappa^{kind}(t))."""
    if T <= 0 or mu_bar <= 0:
        raise DomainError("m_asymptotic needs T > 0 and mu_bar > 0")
    if kind not in _KIND_TO_KAPPA:
        raise DomainError(f"unknown m kind {kind!r}")
    k = kappa(_KIND_TO_KAPPA[kind], t)
    return (math.log(mu_bar / T) + EULER_GAMMA - 2.0 + math.log(8.0 / math.pi)
            - k) / math.sqrt(mu_bar)
