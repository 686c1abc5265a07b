"""Fermi-sphere operator quantities for radial interaction potentials.

The restriction of a radial potential to the Fermi sphere diagonalizes in
Legendre channels; the channel eigenvalues e_ell, the second-order form
constant and the resulting effective coupling rho(lambda) assemble into
weak-coupling critical-temperature curves T(t) = T_c exp(-kappa(t)).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Optional

import numpy as np
from numpy.polynomial.legendre import legvander, leggauss
from scipy.integrate import quad
from scipy.interpolate import CubicSpline

from .core import DomainError
from .kappa import EULER_GAMMA, kappa

_QUAD = dict(epsabs=1e-12, epsrel=1e-11, limit=300)

# number of Gauss-Legendre nodes for angular integrals on the sphere
_N_ANGLE = 240


@dataclass(frozen=True)
class RadialPotential:
    """A radial profile V(r) together with its 3-D Fourier transform.

    profile  : callable r -> V(r), real
    r_max    : radius beyond which V is treated as zero
    k_spline : wavenumber up to which vhat is served from a dense spline;
               beyond it vhat falls back to direct quadrature
    name     : label used in CLI output
    """

    profile: Callable[[float], float]
    r_max: float
    k_spline: float
    name: str = "custom"

    def __post_init__(self):
        if self.r_max <= 0 or self.k_spline <= 0:
            raise DomainError("r_max and k_spline must be > 0")

    @cached_property
    def _spline(self) -> CubicSpline:
        ks = np.linspace(0.0, self.k_spline, 2400)
        vals = np.array([vhat_radial(self, k) for k in ks])
        return CubicSpline(ks, vals)

    def vhat(self, k):
        """V-hat(k), spline-served on [0, k_spline], quadrature beyond.

        Even in k by construction, so |k| is used.
        """
        k = np.abs(np.asarray(k, dtype=float))
        out = np.empty_like(k)
        inside = k <= self.k_spline
        if np.any(inside):
            out[inside] = self._spline(k[inside])
        if np.any(~inside):
            flat = k[~inside].ravel()
            out[~inside] = np.array([vhat_radial(self, kk) for kk in flat]).reshape(
                k[~inside].shape)
        if out.ndim == 0:
            return float(out)
        return out

    @cached_property
    def integral_3d(self) -> float:
        """int V(x) d^3x = 4 pi int r^2 V(r) dr."""
        val, _ = quad(lambda r: r * r * self.profile(r), 0.0, self.r_max, **_QUAD)
        return 4.0 * math.pi * val

    @cached_property
    def vhat_nonpositive(self) -> bool:
        """True if vhat <= 0 (within rounding) on a dense k-grid."""
        ks = np.linspace(0.0, self.k_spline, 800)
        vals = self._spline(ks)
        scale = np.max(np.abs(vals)) or 1.0
        return bool(np.all(vals <= 1e-12 * scale))


def gaussian(depth: float, width: float) -> RadialPotential:
    """V(r) = depth * exp(-(r/width)^2)."""
    if width <= 0:
        raise DomainError("width must be > 0")

    def profile(r, _d=depth, _a=width):
        return _d * math.exp(-((r / _a) ** 2))

    return RadialPotential(profile=profile, r_max=10.0 * width,
                           k_spline=30.0 / width, name="gaussian")


def exponential(depth: float, width: float) -> RadialPotential:
    """V(r) = depth * exp(-r/width)."""
    if width <= 0:
        raise DomainError("width must be > 0")

    def profile(r, _d=depth, _a=width):
        return _d * math.exp(-r / _a)

    return RadialPotential(profile=profile, r_max=90.0 * width,
                           k_spline=60.0 / width, name="exponential")


BUILTIN_POTENTIALS = {"gaussian": gaussian, "exponential": exponential}


def vhat_radial(V: RadialPotential, k: float) -> float:
    """Radial 3-D Fourier transform, convention (2 pi)^{-3/2} int V e^{-ikx}.

    For radial V this is sqrt(2/pi) (1/k) int_0^inf r V(r) sin(kr) dr, with
    the k -> 0 limit sqrt(2/pi) int r^2 V dr.  A divergent profile tail
    shows up as quadrature failure and is reported as a domain error.
    """
    k = abs(float(k))
    pref = math.sqrt(2.0 / math.pi)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        try:
            if k * V.r_max < 1e-6:
                val, _ = quad(lambda r: r * r * V.profile(r), 0.0, V.r_max, **_QUAD)
                return pref * val
            if k * V.r_max > 30.0:
                # oscillatory branch: let QUADPACK treat sin(kr) as a weight
                val, _ = quad(lambda r: r * V.profile(r), 0.0, V.r_max,
                              weight="sin", wvar=k, epsabs=1e-12, epsrel=1e-11,
                              limit=300)
            else:
                val, _ = quad(lambda r: r * V.profile(r) * math.sin(k * r),
                              0.0, V.r_max, **_QUAD)
        except Warning as exc:
            raise DomainError(f"Fourier quadrature failed at k={k}: {exc}")
    return pref * val / k


@dataclass(frozen=True)
class SphereSpectrum:
    """Legendre-channel spectrum of the Fermi-sphere interaction operator."""

    mu_bar: float
    ell_max: int
    e_ell: np.ndarray          # channel eigenvalue per ell (multiplicity 2l+1)
    e_mu: float                # min over channels, <= 0 for admissible V
    ell_min: int               # channel attaining e_mu
    trace_partial: float       # sum (2l+1) e_l up to ell_max
    trace_exact: float         # (sqrt(mu)/2 pi^2) int V d^3x
    w_form: Optional[float] = None
    rho: Optional[float] = None


def _channel_projection(V: RadialPotential, mu_bar: float, ell_max: int,
                        p_mag: float) -> np.ndarray:
    """Legendre coefficients of s -> vhat(sqrt(p^2 + mu - 2 p sqrt(mu) s)).

    Returns, for each ell <= ell_max, (sqrt(mu)/sqrt(2 pi)) times the
    projection integral; at p_mag = sqrt(mu) these are the channel
    eigenvalues e_ell.
    """
    n = max(_N_ANGLE, 2 * ell_max + 32)
    s, w = leggauss(n)
    rmu = math.sqrt(mu_bar)
    karg = np.sqrt(np.maximum(p_mag ** 2 + mu_bar - 2.0 * p_mag * rmu * s, 0.0))
    vals = V.vhat(karg)
    P = legvander(s, ell_max)              # (n, ell_max+1)
    pref = rmu / math.sqrt(2.0 * math.pi)
    return pref * (P.T @ (w * vals))


def v_mu_spectrum(V: RadialPotential, mu_bar: float, ell_max: int = 60) -> SphereSpectrum:
    """Channel eigenvalues of the Fermi-sphere operator up to ell_max."""
    if mu_bar <= 0:
        raise DomainError("v_mu_spectrum needs mu_bar > 0")
    if ell_max < 0:
        raise DomainError("ell_max must be >= 0")
    e = _channel_projection(V, mu_bar, ell_max, math.sqrt(mu_bar))
    k = int(np.argmin(e))
    if k == ell_max and ell_max > 0:
        warnings.warn("minimum channel sits at ell_max; spectrum may be truncated",
                      RuntimeWarning, stacklevel=2)
    if ell_max >= 10:
        tail = np.abs(e[-10:])
        floor = 1e-12 * float(np.max(np.abs(e)))
        if tail[-1] > floor and tail[-1] > 0.5 * tail[0]:
            warnings.warn("channel magnitudes not decaying near ell_max",
                          RuntimeWarning, stacklevel=2)
    mult = 2.0 * np.arange(ell_max + 1) + 1.0
    trace_exact = math.sqrt(mu_bar) / (2.0 * math.pi ** 2) * V.integral_3d
    return SphereSpectrum(mu_bar=mu_bar, ell_max=ell_max, e_ell=e,
                          e_mu=float(e[k]), ell_min=k,
                          trace_partial=float(mult @ e),
                          trace_exact=trace_exact)


def _w_radial(V: RadialPotential, mu_bar: float, P: float) -> float:
    """The l = 0 radial factor of the sphere-convolved potential at |p| = P."""
    return float(_channel_projection(V, mu_bar, 0, P)[0])


def w_mu_form_constant(V: RadialPotential, mu_bar: float) -> float:
    """Second-order form value for the constant (l = 0) sphere function.

    Radial integral of P^2 (w(P)^2 - w_F^2)/|P^2 - mu| + w_F^2 up to P_max,
    plus the analytic large-P remainder; the apparent Fermi-surface
    singularity cancels because w(P)^2 - w_F^2 is Lipschitz and vanishes at
    P = sqrt(mu).  That cancellation is checked numerically up front.
    """
    if mu_bar <= 0:
        raise DomainError("w_mu_form_constant needs mu_bar > 0")
    rmu = math.sqrt(mu_bar)
    w_f = _w_radial(V, mu_bar, rmu)
    scale = max(w_f * w_f, 1e-300)

    h = 1e-3 * rmu
    d1 = abs(_w_radial(V, mu_bar, rmu + h) ** 2 - w_f * w_f)
    d2 = abs(_w_radial(V, mu_bar, rmu + h / 2.0) ** 2 - w_f * w_f)
    if d1 > 0.1 * scale and d2 > 0.6 * d1:
        raise DomainError("sphere-averaged square does not cancel at the "
                          "Fermi surface; form integral would diverge")

    p_max = max(20.0 * rmu, rmu + V.k_spline)

    def integrand(P):
        denom = P * P - mu_bar
        if abs(denom) < 1e-13 * max(mu_bar, 1.0):
            return w_f * w_f
        wp = _w_radial(V, mu_bar, P)
        return P * P * (wp * wp - w_f * w_f) / abs(denom) + w_f * w_f

    body, _ = quad(integrand, 0.0, p_max, points=[rmu],
                   epsabs=1e-12, epsrel=1e-9, limit=400)
    tail = -0.5 * rmu * w_f * w_f * math.log((p_max + rmu) / (p_max - rmu))
    return body + tail


def rho_lambda(V: RadialPotential, mu_bar: float, lam: float,
               ell_max: int = 60) -> float:
    """Effective coupling lam (pi/2 sqrt(mu)) e_mu - lam^2 (pi/2 mu) w_form.

    Restricted to radial V with vhat <= 0, for which the bottom channel is
    l = 0 and the constant sphere function is the ground state.
    """
    if lam <= 0:
        raise DomainError("rho_lambda needs lambda > 0")
    if not V.vhat_nonpositive:
        raise DomainError("rho_lambda requires vhat <= 0 (constant ground "
                          "state); general potentials are not supported")
    spec = v_mu_spectrum(V, mu_bar, ell_max)
    if spec.e_mu >= 0:
        raise DomainError("lowest channel eigenvalue is not negative; no "
                          "weak-coupling pairing instability")
    w_form = w_mu_form_constant(V, mu_bar)
    return (lam * math.pi / (2.0 * math.sqrt(mu_bar)) * spec.e_mu
            - lam * lam * math.pi / (2.0 * mu_bar) * w_form)


@dataclass(frozen=True)
class Curve:
    """A critical-temperature curve parametrized by t = delta_mu / T."""

    kind: str                  # 'i', 'o' or 'g'
    t: np.ndarray
    T: np.ndarray              # absolute temperature (energy units)
    delta_mu: np.ndarray       # t * T
    T_c: float                 # balanced (t = 0) critical temperature

    @property
    def T_over_tc(self) -> np.ndarray:
        return self.T / self.T_c

    @property
    def dmu_over_tc(self) -> np.ndarray:
        return self.delta_mu / self.T_c


def critical_temperature_balanced(mu_bar: float, rho: float) -> float:
    """T_c = mu (8 e^{gamma - 2} / pi) e^{pi / (2 sqrt(mu) rho)}, rho < 0."""
    if rho >= 0:
        raise DomainError("balanced critical temperature needs rho < 0")
    return (mu_bar * 8.0 * math.exp(EULER_GAMMA - 2.0) / math.pi
            * math.exp(math.pi / (2.0 * math.sqrt(mu_bar) * rho)))


def critical_curve(V: RadialPotential, mu_bar: float, lam: float, kind: str,
                   t_grid) -> Curve:
    """Weak-coupling curve T(t) = T_c exp(-kappa^kind(t)), delta_mu = t T."""
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.size == 0:
        raise DomainError("t_grid must be non-empty")
    if np.any(t_grid < 0):
        raise DomainError("t_grid must be >= 0")
    rho = rho_lambda(V, mu_bar, lam)
    t_c = critical_temperature_balanced(mu_bar, rho)
    kap = np.array([kappa(kind, t) for t in t_grid])
    T = t_c * np.exp(-kap)
    return Curve(kind=kind, t=t_grid, T=T, delta_mu=t_grid * T, T_c=t_c)
