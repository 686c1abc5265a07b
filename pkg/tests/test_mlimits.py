import math

import pytest

from polarfermi.core import DomainError, PhysParams
from polarfermi.kappa import EULER_GAMMA, kappa, kappa_g
from polarfermi.mlimits import (m_asymptotic, m_bar_numeric, m_numeric,
                                m_tilde_numeric)


def _params(t, T, mu=1.0):
    return PhysParams(mu_bar=mu, delta_mu=t * T, T=T)


def test_balanced_all_three_coincide():
    p = _params(0.0, 1e-2)
    m = m_numeric(p).value
    assert m_tilde_numeric(p).value == pytest.approx(m, rel=1e-12)
    assert m_bar_numeric(p).value == pytest.approx(m, rel=1e-8)


def test_ordering_at_moderate_temperature():
    for t in (0.0, 1.0, 2.5, 3.0):
        p = _params(t, 1e-2)
        m = m_numeric(p).value
        mb = m_bar_numeric(p).value
        mt = m_tilde_numeric(p).value
        assert m <= mb + 1e-10
        assert mb <= mt + 1e-10


def test_tilde_strictly_larger_above_threshold():
    p = _params(3.0, 1e-2)
    assert m_tilde_numeric(p).value > m_numeric(p).value + 1e-3


def test_asymptotic_formula_matches_kappa():
    mu, T, t = 2.0, 1e-3, 1.5
    for kind, kap_kind in (("plain", "i"), ("tilde", "o"), ("bar", "g")):
        expect = (math.log(mu / T) + EULER_GAMMA - 2.0
                  + math.log(8.0 / math.pi) - kappa(kap_kind, t)) / math.sqrt(mu)
        assert m_asymptotic(T, t, mu, kind) == pytest.approx(expect, rel=1e-12)


def test_numeric_approaches_asymptote():
    # one (kind, t) pin at moderate cost; the full sweep runs in acceptance
    t = 2.5
    errs = []
    for T in (1e-2, 1e-3):
        p = _params(t, T)
        errs.append(abs(m_numeric(p).value - m_asymptotic(T, t, 1.0, "plain")))
    assert errs[1] < errs[0]
    assert errs[1] < 0.02


def test_bar_maximizer_tracks_kappa_g_minimizer():
    """y*/T converges to the d that minimizes zeta as T -> 0."""
    t, T = 2.5, 1e-3
    y_star = m_bar_numeric(_params(t, T)).y_star
    assert y_star / T == pytest.approx(kappa_g(t).minimizer_d, rel=0.05)


def test_result_kinds():
    p = _params(1.0, 1e-2)
    assert m_numeric(p).kind == "plain"
    assert m_tilde_numeric(p).kind == "tilde"
    assert m_bar_numeric(p).kind == "bar"


def test_domain_errors():
    with pytest.raises(DomainError):
        m_numeric(PhysParams(mu_bar=-1.0, delta_mu=0.0, T=1e-2))
    with pytest.raises(DomainError):
        m_numeric(PhysParams(mu_bar=1.0, delta_mu=0.0, T=0.0))
    with pytest.raises(DomainError):
        m_asymptotic(1e-3, 1.0, 1.0, "nope")
