"""Independent numerical oracles used by the unit and acceptance tests.

Everything here is built directly from closed-form Fourier transforms and
generic quadrature, deliberately sharing no code paths with the package
implementations they check.
"""

import math

import numpy as np
from numpy.polynomial.legendre import leggauss


def vhat_gaussian(k, depth, width):
    """Closed-form transform of depth * exp(-(r/width)^2)."""
    k = np.asarray(k, dtype=float)
    return depth * width ** 3 / (2.0 * math.sqrt(2.0)) * np.exp(
        -k * k * width * width / 4.0)


def vhat_exponential(k, depth, width):
    """Closed-form transform of depth * exp(-r/width)."""
    k = np.asarray(k, dtype=float)
    return (math.sqrt(2.0 / math.pi) * 2.0 * width ** 3 * depth
            / (1.0 + (width * k) ** 2) ** 2)


def sphere_matrix_eigenvalues(vhat, mu_bar, n_theta=24, n_phi=49):
    """Eigenvalues of the dense sphere discretization of the V_mu operator.

    Product quadrature (Gauss-Legendre in cos theta, trapezoid in phi) turns
    the integral operator with kernel sqrt(mu) (2 pi)^{-3/2} vhat(|p - p'|),
    p and p' on the sphere of radius sqrt(mu), into a symmetric matrix via
    the usual sqrt(w_a w_b) similarity.  Its eigenvalues approach the
    Legendre channel values e_ell, each with multiplicity 2 ell + 1.
    """
    s, w_s = leggauss(n_theta)
    phi = 2.0 * math.pi * np.arange(n_phi) / n_phi
    w_phi = 2.0 * math.pi / n_phi

    sin_t = np.sqrt(1.0 - s * s)
    x = np.outer(sin_t, np.cos(phi)).ravel()
    y = np.outer(sin_t, np.sin(phi)).ravel()
    z = np.repeat(s, n_phi)
    wq = np.repeat(w_s, n_phi) * w_phi

    dots = np.clip(np.outer(x, x) + np.outer(y, y) + np.outer(z, z), -1.0, 1.0)
    dist = np.sqrt(2.0 * mu_bar * (1.0 - dots))
    kern = math.sqrt(mu_bar) / (2.0 * math.pi) ** 1.5 * vhat(dist)
    sq = np.sqrt(wq)
    mat = sq[:, None] * kern * sq[None, :]
    return np.linalg.eigvalsh(mat)


def w_form_tensor(vhat, mu_bar, n_angle=200, n_radial=40, p_max_factor=40.0):
    """Second-order form constant by plain 2-D tensor quadrature.

    The sphere average w(P) comes from a Gauss-Legendre angular rule applied
    to the closed-form vhat; the radial integral uses composite panels
    geometrically refined toward the (removable) Fermi-surface point, plus
    the analytic large-P remainder.
    """
    rmu = math.sqrt(mu_bar)
    s, w_ang = leggauss(n_angle)

    def w_of(P):
        karg = np.sqrt(np.maximum(P * P + mu_bar - 2.0 * P * rmu * s, 0.0))
        return rmu / math.sqrt(2.0 * math.pi) * float(w_ang @ vhat(karg))

    w_f = w_of(rmu)

    def integrand(P):
        denom = P * P - mu_bar
        if abs(denom) < 1e-13 * max(mu_bar, 1.0):
            return w_f * w_f
        wp = w_of(P)
        return P * P * (wp * wp - w_f * w_f) / abs(denom) + w_f * w_f

    p_max = p_max_factor * rmu
    offsets = rmu * np.concatenate(([0.0], np.geomspace(1e-8, 1.0, 25)))
    edges = np.unique(np.concatenate((rmu - offsets[::-1], rmu + offsets,
                                      np.linspace(2.0 * rmu, p_max, 30))))
    edges = edges[(edges >= 0.0) & (edges <= p_max)]
    xg, wg = leggauss(n_radial)
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        total += half * sum(wi * integrand(mid + half * xi)
                            for xi, wi in zip(xg, wg))
    tail = -0.5 * rmu * w_f * w_f * math.log((p_max + rmu) / (p_max - rmu))
    return total + tail
