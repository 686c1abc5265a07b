"""Dimensionless pairing-kernel functions and the physical kernels K^Delta, K_tilde.

Everything downstream (kappa functions, m-integrals, the 1-D toy model and the
free-energy functional) is built on the three ingredients defined here:

* ``upsilon0`` -- the combined Fermi-factor weight of the two spin species,
* ``f_val`` and its minimizer ``b_of_c`` -- the dimensionless kernel profile,
* ``K_delta`` / ``K_tilde`` -- the dispersion kernels, with K_tilde the
  pointwise infimum of K_delta over the gap amplitude.

Units: hbar = 2m = k_B = 1, so momenta squared are energies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

# b(c) = 0 exactly for c <= acosh(2) = ln(2 + sqrt(3)); the kernel is monotone
# in Delta below this imbalance ratio.
COSH_THRESHOLD = math.acosh(2.0)

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class DomainError(ValueError):
    """Raised when an operation is evaluated outside its physical domain."""


@dataclass(frozen=True)
class PhysParams:
    """A thermodynamic point plus coupling strength.

    mu_bar   : average chemical potential (energy)
    delta_mu : half the chemical-potential difference, >= 0 (energy)
    T        : temperature, >= 0 (energy)
    coupling : interaction strength (lambda for 3-D potentials, g for the
               1-D contact model), > 0
    """

    mu_bar: float
    delta_mu: float
    T: float
    coupling: float = 1.0

    def __post_init__(self):
        if self.delta_mu < 0:
            raise DomainError(f"delta_mu must be >= 0, got {self.delta_mu}")
        if self.T < 0:
            raise DomainError(f"T must be >= 0, got {self.T}")
        if self.coupling <= 0:
            raise DomainError(f"coupling must be > 0, got {self.coupling}")

    @property
    def c(self) -> float:
        """Imbalance ratio delta_mu / T; requires T > 0."""
        if self.T <= 0:
            raise DomainError("c = delta_mu/T needs T > 0")
        return self.delta_mu / self.T

    def with_(self, **kw) -> "PhysParams":
        d = dict(mu_bar=self.mu_bar, delta_mu=self.delta_mu, T=self.T,
                 coupling=self.coupling)
        d.update(kw)
        return PhysParams(**d)


@dataclass(frozen=True)
class KernelPoint:
    """A kernel evaluation bundled with its dispersion data."""

    t: float        # p^2 - mu_bar
    E: float        # sqrt(t^2 + Delta^2)
    value: float    # kernel value, > 0 for T > 0


def upsilon0(t, params: PhysParams):
    """Combined Fermi-factor weight 1 - f(t+dmu) - f(t-dmu).

    Evaluated in the algebraically equivalent (and exactly odd) form
    [tanh((t+dmu)/2T) + tanh((t-dmu)/2T)] / 2.  Accepts scalars or arrays.
    """
    if params.T <= 0:
        raise DomainError("upsilon0 needs T > 0")
    two_t = 2.0 * params.T
    return 0.5 * (np.tanh((t + params.delta_mu) / two_t)
                  + np.tanh((t - params.delta_mu) / two_t))


def f_val(x, c):
    """x / (tanh((x+c)/2) + tanh((x-c)/2)), with the removable x=0 limit.

    The limit value at x = 0 is cosh^2(c/2).  Accepts scalars or arrays in x.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise DomainError("f_val needs x >= 0")
    if np.any(np.asarray(c) < 0):
        raise DomainError("f_val needs c >= 0")
    denom = np.tanh((x + c) / 2.0) + np.tanh((x - c) / 2.0)
    small = x < 1e-6
    safe = np.where(small, 1.0, denom)
    # deep inside the plateau the denominator underflows along with the
    # discarded branch of the where; both are benign
    with np.errstate(over="ignore", divide="ignore"):
        out = np.where(small, np.cosh(c / 2.0) ** 2, x / safe)
    if out.ndim == 0:
        return float(out)
    return out


@lru_cache(maxsize=4096)
def b_of_c(c: float) -> float:
    """Argmin over x >= 0 of f_val(., c); exactly 0 for c <= acosh(2).

    Coarse scan plus golden-section refinement, absolute tolerance 1e-10.
    Ties within 1e-12 relative of f(0, c) resolve to 0, which keeps b(c)
    continuous at the threshold.
    """
    if c < 0:
        raise DomainError("b_of_c needs c >= 0")
    if c <= COSH_THRESHOLD:
        return 0.0
    x_hi = max(10.0, 4.0 * c)
    xs = np.linspace(0.0, x_hi, 400)
    fs = f_val(xs, c)
    k = int(np.argmin(fs))
    if k == 0:
        return 0.0
    lo = xs[max(k - 1, 0)]
    hi = xs[min(k + 1, len(xs) - 1)]
    x_min, f_min = _golden_min(lambda x: f_val(x, c), lo, hi, xtol=1e-10)
    if f_min >= f_val(0.0, c) * (1.0 - 1e-12):
        return 0.0
    return x_min


def _golden_min(f, lo, hi, xtol=1e-10, max_iter=200):
    """Golden-section search for the minimum of a unimodal f on [lo, hi]."""
    a, b = lo, hi
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(max_iter):
        if b - a <= xtol:
            break
        if f1 < f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = f(x2)
    xm = 0.5 * (a + b)
    return xm, f(xm)


def K_delta(t, Delta, params: PhysParams):
    """The pairing kernel 2E / [tanh((E+dmu)/2T) + tanh((E-dmu)/2T)].

    E = sqrt(t^2 + Delta^2).  Equals 2T * f_val(E/T, delta_mu/T); the
    removable singularity at E = 0 is handled inside f_val.  At T = 0 the
    kernel degenerates to the pointwise limit E, which is only well defined
    for delta_mu = 0; other T = 0 points are rejected.
    """
    Delta = np.asarray(Delta, dtype=float)
    if np.any(Delta < 0):
        raise DomainError("K_delta needs Delta >= 0")
    t = np.asarray(t, dtype=float)
    E = np.hypot(t, Delta)
    if params.T == 0:
        if params.delta_mu > 0:
            raise DomainError("T = 0 kernel is discontinuous for delta_mu > 0")
        out = E
        return float(out) if out.ndim == 0 else out
    out = 2.0 * params.T * f_val(E / params.T, params.c)
    return out


def K_tilde(t, params: PhysParams):
    """Pointwise infimum over Delta >= 0 of K_delta(t, Delta, params).

    Equals K_delta(t, 0, .) outside the plateau |t| >= T*b(c) and the
    constant 2T*f(b(c), c) inside it.
    """
    if params.T <= 0:
        raise DomainError("K_tilde needs T > 0")
    c = params.c
    b = b_of_c(c)
    k0 = K_delta(t, 0.0, params)
    if b == 0.0:
        return k0
    plateau = 2.0 * params.T * f_val(b, c)
    t = np.asarray(t, dtype=float)
    out = np.where(np.abs(t) / params.T >= b, k0, plateau)
    if out.ndim == 0:
        return float(out)
    return out


def kernel_point(t: float, Delta: float, params: PhysParams) -> KernelPoint:
    """K_delta evaluation packaged with its dispersion data."""
    E = math.hypot(t, Delta)
    return KernelPoint(t=t, E=E, value=float(K_delta(t, Delta, params)))
