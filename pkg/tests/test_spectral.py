import math

import numpy as np
import pytest

from polarfermi.core import DomainError
from polarfermi.spectral import (BUILTIN_POTENTIALS, critical_curve,
                                 critical_temperature_balanced, exponential,
                                 gaussian, rho_lambda, v_mu_spectrum,
                                 vhat_radial, w_mu_form_constant)

from oracles import (sphere_matrix_eigenvalues, vhat_exponential,
                     vhat_gaussian, w_form_tensor)

ACOSH2 = math.acosh(2.0)


@pytest.fixture(scope="module")
def gauss_pot():
    return gaussian(depth=-1.0, width=1.0)


@pytest.fixture(scope="module")
def exp_pot():
    return exponential(depth=-0.5, width=0.7)


def test_vhat_gaussian_closed_form(gauss_pot):
    ks = np.concatenate(([0.0], np.geomspace(1e-4, 40.0, 25)))
    for k in ks:
        assert gauss_pot.vhat(k) == pytest.approx(
            float(vhat_gaussian(k, -1.0, 1.0)), rel=1e-8, abs=1e-14)


def test_vhat_exponential_closed_form(exp_pot):
    ks = np.concatenate(([0.0], np.geomspace(1e-4, 50.0, 25)))
    for k in ks:
        assert exp_pot.vhat(k) == pytest.approx(
            float(vhat_exponential(k, -0.5, 0.7)), rel=1e-6, abs=1e-12)


def test_vhat_even(gauss_pot):
    assert gauss_pot.vhat(-2.0) == pytest.approx(gauss_pot.vhat(2.0), rel=1e-14)


def test_vhat_radial_direct_vs_spline(gauss_pot):
    # beyond k_spline the direct quadrature branch takes over; both paths
    # must agree with the closed form
    k = gauss_pot.k_spline + 1.0
    assert vhat_radial(gauss_pot, k) == pytest.approx(
        float(vhat_gaussian(k, -1.0, 1.0)), abs=1e-14)


def test_integral_3d(gauss_pot, exp_pot):
    assert gauss_pot.integral_3d == pytest.approx(-math.pi ** 1.5, rel=1e-10)
    assert exp_pot.integral_3d == pytest.approx(
        8.0 * math.pi * 0.7 ** 3 * (-0.5), rel=1e-10)


def test_builtin_registry():
    assert set(BUILTIN_POTENTIALS) == {"gaussian", "exponential"}
    with pytest.raises(DomainError):
        gaussian(depth=-1.0, width=0.0)


def test_vhat_nonpositive(gauss_pot):
    assert gauss_pot.vhat_nonpositive
    assert not gaussian(depth=+1.0, width=1.0).vhat_nonpositive


def test_trace_identity(gauss_pot):
    spec = v_mu_spectrum(gauss_pot, 1.0, ell_max=40)
    rel = abs(spec.trace_partial - spec.trace_exact) / abs(spec.trace_exact)
    assert rel < 0.01
    spec100 = v_mu_spectrum(gauss_pot, 1.0, ell_max=100)
    rel100 = abs(spec100.trace_partial - spec100.trace_exact) / abs(spec100.trace_exact)
    assert rel100 < 1e-3


def test_spectrum_shape(gauss_pot):
    spec = v_mu_spectrum(gauss_pot, 1.0, ell_max=12)
    assert spec.e_ell.shape == (13,)
    assert spec.ell_min == 0
    assert spec.e_mu == spec.e_ell[0] < 0
    # attractive monotone vhat: channel magnitudes decay until they reach
    # the quadrature noise floor
    mags = np.abs(spec.e_ell)
    above = mags > 1e-12 * mags[0]
    assert np.all(np.diff(mags[above]) < 0)


def test_spectrum_vs_dense_sphere_oracle(gauss_pot):
    spec = v_mu_spectrum(gauss_pot, 1.0, ell_max=8)
    expect = np.sort(np.repeat(spec.e_ell,
                               2 * np.arange(9) + 1))
    eigs = np.sort(sphere_matrix_eigenvalues(
        lambda k: vhat_gaussian(k, -1.0, 1.0), 1.0))
    assert np.max(np.abs(eigs[:81] - expect[:81])) < 1e-6


def test_w_form_vs_tensor_oracle(gauss_pot):
    w_pkg = w_mu_form_constant(gauss_pot, 1.0)
    w_orc = w_form_tensor(lambda k: vhat_gaussian(k, -1.0, 1.0), 1.0)
    assert w_pkg == pytest.approx(w_orc, rel=1e-4)
    assert w_pkg > 0.0


def test_rho_is_exact_quadratic(gauss_pot):
    lams = [0.1, 0.2, 0.4]
    rhos = [rho_lambda(gauss_pot, 1.0, lam, ell_max=20) for lam in lams]
    coeffs = np.polyfit(lams, rhos, 2)
    assert abs(coeffs[2]) < 1e-14                       # no constant term
    predicted = np.polyval(coeffs, 0.3)
    actual = rho_lambda(gauss_pot, 1.0, 0.3, ell_max=20)
    assert actual == pytest.approx(predicted, rel=1e-10)
    assert actual < 0.0


def test_rho_rejects_repulsive_potential():
    with pytest.raises(DomainError):
        rho_lambda(gaussian(depth=+1.0, width=1.0), 1.0, 0.3)


def test_critical_temperature_balanced():
    with pytest.raises(DomainError):
        critical_temperature_balanced(1.0, 0.1)
    rho = -0.12
    tc = critical_temperature_balanced(1.0, rho)
    expect = 8.0 * math.exp(np.euler_gamma - 2.0) / math.pi * math.exp(
        math.pi / (2.0 * rho))
    assert tc == pytest.approx(expect, rel=1e-14)


def test_critical_curve_i_equals_o_below_threshold(gauss_pot):
    ts = np.linspace(0.0, ACOSH2, 8)
    ci = critical_curve(gauss_pot, 1.0, 0.4, "i", ts)
    co = critical_curve(gauss_pot, 1.0, 0.4, "o", ts)
    assert np.allclose(ci.T, co.T, rtol=1e-10)
    assert ci.T_over_tc[0] == pytest.approx(1.0, abs=1e-10)
    assert ci.dmu_over_tc[0] == 0.0


def test_critical_curve_validation(gauss_pot):
    with pytest.raises(DomainError):
        critical_curve(gauss_pot, 1.0, 0.4, "i", [-1.0, 0.5])
