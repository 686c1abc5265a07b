"""BCS free-energy functional on momentum grids, gap-solution states,
Euler-Lagrange certification, and the normal-vs-superfluid decision.

States are triples (gamma_plus, gamma_minus, alpha_hat) sampled on a fixed
quadrature grid; the entropy uses the four-eigenvalue form in the variables
r = (1 + gp - gm)/2, s = (1 - gp + gm)/2, w = sqrt((1-gp-gm)^2 + 4 a^2)/2.
Free-energy comparisons against the normal state are computed nodewise on a
shared grid so that quadrature errors cancel in the difference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Union

import numpy as np
from scipy.integrate import quad

from .core import DomainError, PhysParams, K_delta, upsilon0
from .kappa import _fermi
from .spectral import RadialPotential
from .toy1d import GapSolutionSet, solve_gap_1d

_ADMISSIBLE_TOL = 1e-12


# ---------------------------------------------------------------------------
# grid

@dataclass(frozen=True)
class MomentumGrid:
    """Quadrature nodes p >= 0 with weights encoding the full measure.

    kind 'line'     : weights integrate over the whole real line (factor 2
                      for the even integrands used here);
    kind 'radial3d' : weights carry 4 pi p^2.
    """

    p: np.ndarray
    weights: np.ndarray
    kind: str = "line"

    def __post_init__(self):
        if self.p.ndim != 1 or self.p.shape != self.weights.shape:
            raise DomainError("grid nodes and weights must be equal-length 1-D")
        if np.any(np.diff(self.p) <= 0):
            raise DomainError("grid nodes must be strictly increasing")
        if self.kind not in ("line", "radial3d"):
            raise DomainError(f"unknown grid kind {self.kind!r}")

    @property
    def n(self) -> int:
        return self.p.size

    def integrate(self, values: np.ndarray) -> float:
        return float(self.weights @ values)


def momentum_grid(params: PhysParams, delta_scale: float = 0.0,
                  kind: str = "line", fermi_window: float = 200.0,
                  n_gl: int = 48) -> MomentumGrid:
    """Composite Gauss-Legendre grid clustered at the Fermi surface.

    Panels shrink geometrically toward p = sqrt(mu) with the innermost at
    the thermal scale T; the dense region ends at p^2 = mu + B with
    B = max(fermi_window T, 60 Delta, 60 delta_mu), and the remaining
    (P, infinity) range is covered through the substitution u = 1/p, which
    is what makes slowly decaying tails (pair amplitude ~ p^{-2}) sum
    accurately.  Roughly 2000 nodes at the defaults.
    """
    mu, T = params.mu_bar, params.T
    if mu <= 0 or T <= 0:
        raise DomainError("momentum_grid needs mu_bar > 0 and T > 0")
    B = max(fermi_window * T, 60.0 * delta_scale, 60.0 * params.delta_mu)
    h = T / 16.0
    dts = [0.0]
    step = h
    while step < max(B, mu):
        dts.append(step)
        step *= 2.0
    dts.append(max(B, mu))
    dts = np.asarray(dts)
    outer = np.sqrt(mu + dts[dts <= B])
    if B not in dts:
        outer = np.append(outer, math.sqrt(mu + B))
    inner = np.sqrt(mu - dts[dts < mu * (1.0 - 1e-12)])
    edges = np.unique(np.concatenate(([0.0], inner, outer)))

    x, gw = np.polynomial.legendre.leggauss(n_gl)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    p = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    w = (half[:, None] * gw[None, :]).ravel()

    # compactified tail (P, infinity): u = 1/p, du measure u^{-2}
    u1 = 1.0 / edges[-1]
    u_edges = u1 * np.array([1.0, 0.25, 0.0625, 0.015625, 0.00390625, 0.0])
    for a, b in zip(u_edges[:-1], u_edges[1:]):
        umid, uhalf = 0.5 * (a + b), 0.5 * (b - a)
        un = umid + uhalf * x
        uw = np.abs(uhalf) * gw
        p = np.concatenate((p, 1.0 / un))
        w = np.concatenate((w, uw / (un * un)))

    order = np.argsort(p)
    p, w = p[order], w[order]
    if kind == "line":
        w = 2.0 * w
    elif kind == "radial3d":
        w = 4.0 * math.pi * p * p * w
    return MomentumGrid(p=p, weights=w, kind=kind)


# ---------------------------------------------------------------------------
# states

@dataclass(frozen=True)
class BCSState:
    """Occupations and pair amplitude sampled on a momentum grid."""

    grid: MomentumGrid
    gamma_plus: np.ndarray
    gamma_minus: np.ndarray
    alpha_hat: np.ndarray

    def __post_init__(self):
        n = self.grid.n
        for name in ("gamma_plus", "gamma_minus", "alpha_hat"):
            arr = getattr(self, name)
            if arr.shape != (n,):
                raise DomainError(f"{name} must have shape ({n},)")
        self.validate()

    def validate(self):
        gp, gm, a = self.gamma_plus, self.gamma_minus, self.alpha_hat
        if np.any(gp < -_ADMISSIBLE_TOL) or np.any(gp > 1 + _ADMISSIBLE_TOL):
            raise DomainError("gamma_plus outside [0, 1]")
        if np.any(gm < -_ADMISSIBLE_TOL) or np.any(gm > 1 + _ADMISSIBLE_TOL):
            raise DomainError("gamma_minus outside [0, 1]")
        a2 = a * a
        if (np.any(a2 > gp * (1.0 - gm) + _ADMISSIBLE_TOL)
                or np.any(a2 > gm * (1.0 - gp) + _ADMISSIBLE_TOL)):
            raise DomainError("pair amplitude violates admissibility")

    def rsw(self):
        """The entropy variables (r, s, w) per node."""
        gp, gm, a = self.gamma_plus, self.gamma_minus, self.alpha_hat
        r = 0.5 * (1.0 + gp - gm)
        s = 0.5 * (1.0 - gp + gm)
        w = 0.5 * np.sqrt((1.0 - gp - gm) ** 2 + 4.0 * a * a)
        return r, s, w


def normal_state(params: PhysParams, grid: MomentumGrid) -> BCSState:
    """alpha = 0, Fermi-Dirac occupations at chemical potentials mu +- dmu."""
    if params.T <= 0:
        raise DomainError("normal_state needs T > 0")
    t = grid.p ** 2 - params.mu_bar
    gp = _fermi((t - params.delta_mu) / params.T)
    gm = _fermi((t + params.delta_mu) / params.T)
    return BCSState(grid=grid, gamma_plus=np.asarray(gp),
                    gamma_minus=np.asarray(gm),
                    alpha_hat=np.zeros(grid.n))


def state_from_gap_solution(Delta: float, params: PhysParams,
                            grid: MomentumGrid) -> BCSState:
    """Critical-point state for a certified gap-equation root Delta.

    Per node: E = sqrt(t^2 + Delta^2), w = Upsilon0(E)/2, alpha = Delta w/E;
    the four entropy eigenvalues are the Fermi factors of +-E -+ delta_mu,
    which fixes r and s and hence gamma_plus/gamma_minus through the linear
    relations r - s = gamma_plus - gamma_minus, 1 - gamma_plus -
    gamma_minus = 2 t w / E.
    """
    if Delta < 0:
        raise DomainError("Delta must be >= 0")
    if params.T <= 0:
        raise DomainError("state_from_gap_solution needs T > 0")
    t = grid.p ** 2 - params.mu_bar
    E = np.hypot(t, Delta)
    x_p = (E + params.delta_mu) / params.T
    x_m = (E - params.delta_mu) / params.T
    r_pw = _fermi(-x_p)         # r + w
    r_mw = _fermi(x_m)          # r - w
    s_pw = _fermi(-x_m)         # s + w
    s_mw = _fermi(x_p)          # s - w
    r = 0.5 * (r_pw + r_mw)
    s = 0.5 * (s_pw + s_mw)
    w = 0.5 * (r_pw - r_mw)
    with np.errstate(invalid="ignore"):
        ratio = np.where(E > 0.0, t / np.where(E > 0.0, E, 1.0), 0.0)
    one_minus_sum = 2.0 * ratio * w
    diff = r - s
    gp = 0.5 * (1.0 - one_minus_sum + diff)
    gm = 0.5 * (1.0 - one_minus_sum - diff)
    alpha = np.where(E > 0.0, Delta * w / np.where(E > 0.0, E, 1.0), 0.0)
    if np.any(gp < -_ADMISSIBLE_TOL) or np.any(gp > 1 + _ADMISSIBLE_TOL) \
            or np.any(gm < -_ADMISSIBLE_TOL) or np.any(gm > 1 + _ADMISSIBLE_TOL):
        raise DomainError("reconstruction left [0,1]; Delta is not a "
                          "gap-equation solution at these parameters")
    return BCSState(grid=grid, gamma_plus=np.clip(gp, 0.0, 1.0),
                    gamma_minus=np.clip(gm, 0.0, 1.0), alpha_hat=alpha)


# ---------------------------------------------------------------------------
# interactions

@dataclass(frozen=True)
class ContactInteraction:
    """1-D delta interaction of strength g; energy term -g |alpha(0)|^2."""

    g: float

    def __post_init__(self):
        if self.g <= 0:
            raise DomainError("contact strength must be > 0")


@dataclass(frozen=True)
class RadialInteraction:
    """3-D radial potential scaled by lambda; experimental energy path."""

    potential: RadialPotential
    lam: float


Interaction = Union[ContactInteraction, RadialInteraction]


def _alpha_at_origin(state: BCSState) -> float:
    """alpha(0) = (2 pi)^{-1/2} int alpha_hat dp for the 1-D line measure."""
    return state.grid.integrate(state.alpha_hat) / math.sqrt(2.0 * math.pi)


def _xlogx(x: np.ndarray) -> np.ndarray:
    out = np.zeros_like(x)
    pos = x > 0.0
    out[pos] = x[pos] * np.log(x[pos])
    return out


def _entropy_density(state: BCSState) -> np.ndarray:
    r, s, w = state.rsw()
    return -(_xlogx(r + w) + _xlogx(r - w) + _xlogx(s + w) + _xlogx(s - w))


def _interaction_energy(state: BCSState, interaction: Interaction) -> float:
    if isinstance(interaction, ContactInteraction):
        a0 = _alpha_at_origin(state)
        return -interaction.g * a0 * a0
    if isinstance(interaction, RadialInteraction):
        return _radial_interaction_energy(state, interaction)
    raise DomainError(f"unknown interaction {interaction!r}")


def _radial_interaction_energy(state: BCSState,
                               interaction: RadialInteraction) -> float:
    """lambda int |alpha(x)|^2 V d^3x via the radial back-transform.

    Experimental: adequate for smooth alpha_hat, not certified to the same
    tolerance as the contact path.
    """
    if state.grid.kind != "radial3d":
        raise DomainError("radial interaction needs a radial3d grid")
    V = interaction.potential
    p = state.grid.p
    wgt = state.grid.weights          # includes 4 pi p^2
    a = state.alpha_hat

    def alpha_r(r):
        pr = p * r
        sinc = np.where(pr > 1e-8, np.sin(pr) / np.where(pr > 0, pr, 1.0), 1.0)
        return float(wgt @ (a * sinc)) / (2.0 * math.pi) ** 1.5

    val, _ = quad(lambda r: r * r * V.profile(r) * alpha_r(r) ** 2,
                  0.0, V.r_max, epsabs=1e-13, epsrel=1e-10, limit=200)
    return interaction.lam * 4.0 * math.pi * val


def free_energy(state: BCSState, params: PhysParams,
                interaction: Optional[Interaction] = None) -> float:
    """Kinetic + interaction - (T/2) S, per unit length (or volume)."""
    state.validate()
    if interaction is None:
        interaction = ContactInteraction(params.coupling)
    t = state.grid.p ** 2 - params.mu_bar
    kin = 0.5 * state.grid.integrate(
        (t - params.delta_mu) * state.gamma_plus
        + (t + params.delta_mu) * state.gamma_minus)
    ent = state.grid.integrate(_entropy_density(state))
    return kin + _interaction_energy(state, interaction) - 0.5 * params.T * ent


def free_energy_difference(state: BCSState, params: PhysParams,
                           interaction: Optional[Interaction] = None) -> float:
    """F(state) - F(normal state) accumulated nodewise on the shared grid.

    The two integrands agree outside the Fermi-surface layer, so the
    difference is resolved far better than either absolute value.
    """
    if interaction is None:
        interaction = ContactInteraction(params.coupling)
    normal = normal_state(params, state.grid)
    t = state.grid.p ** 2 - params.mu_bar
    dkin = 0.5 * state.grid.integrate(
        (t - params.delta_mu) * (state.gamma_plus - normal.gamma_plus)
        + (t + params.delta_mu) * (state.gamma_minus - normal.gamma_minus))
    dent = state.grid.integrate(_entropy_density(state)
                                - _entropy_density(normal))
    dint = (_interaction_energy(state, interaction)
            - _interaction_energy(normal, interaction))
    return dkin + dint - 0.5 * params.T * dent


# ---------------------------------------------------------------------------
# Euler-Lagrange system

def _f_sum(r: np.ndarray, s: np.ndarray, w: np.ndarray) -> np.ndarray:
    """f_r(w) + f_s(w) with f_a(b) = ln((a+b)/(a-b))/b, series for small w."""
    small = w < 1e-8 * np.minimum(r, s)
    ws = np.where(small, 0.0, w)
    direct = (np.log(r + ws) - np.log(np.where(small, 1.0, r - ws))
              + np.log(s + ws) - np.log(np.where(small, 1.0, s - ws)))
    direct = np.where(small, 0.0, direct / np.where(small, 1.0, ws))
    series = 2.0 / r + 2.0 / s + (2.0 / 3.0) * w * w * (r ** -3 + s ** -3)
    return np.where(small, series, direct)


_INTERIOR_FLOOR = 1e-11


def interior_mask(state: BCSState) -> np.ndarray:
    """Nodes where the state is resolvably inside the admissible set.

    Far from the Fermi surface the occupations saturate to the boundary:
    min(r, s) - w decays like exp(-E/T) and below ~1e-11 the difference is
    swamped by the rounding of r and w themselves, so the logarithms in the
    Euler-Lagrange system carry no information there.  Such nodes are
    excluded from residual evaluation.
    """
    r, s, w = state.rsw()
    return (np.minimum(r, s) - w > _INTERIOR_FLOOR) & (w > 0.0)


def stationarity_residual(state: BCSState, params: PhysParams,
                          interaction: Optional[Interaction] = None) -> float:
    """Max-abs residual of the three Euler-Lagrange equations.

    Residuals are evaluated on interior nodes only; a state with no
    interior nodes at all is rejected as a boundary state.
    """
    if interaction is None:
        interaction = ContactInteraction(params.coupling)
    if not isinstance(interaction, ContactInteraction):
        raise DomainError("stationarity residuals are implemented for the "
                          "contact interaction only")
    mask = interior_mask(state)
    if not np.any(mask):
        raise DomainError("state sits on the admissible-set boundary "
                          "everywhere; Euler-Lagrange system is singular")
    r, s, w = state.rsw()
    r, s, w = r[mask], s[mask], w[mask]
    t = (state.grid.p ** 2 - params.mu_bar)[mask]
    a = state.alpha_hat[mask]
    fsum = _f_sum(r, s, w)
    T = params.T

    # pair equation: (Vhat * alpha)(p) = -(T/4) alpha (f_r + f_s);
    # contact convolution is the constant -(g/2 pi) int alpha dp
    conv = -interaction.g / (2.0 * math.pi) * state.grid.integrate(state.alpha_hat)
    res1 = conv + 0.25 * T * a * fsum

    # imbalance equation: delta_mu = (T/2) ln((r^2-w^2)/(s^2-w^2))
    res2 = params.delta_mu - 0.5 * T * (np.log(r + w) + np.log(r - w)
                                        - np.log(s + w) - np.log(s - w))

    # dispersion equation: p^2 - mu = (T/4)(1 - gp - gm)(f_r + f_s)
    one_minus_sum = (1.0 - state.gamma_plus - state.gamma_minus)[mask]
    res3 = t - 0.25 * T * one_minus_sum * fsum

    return float(max(np.max(np.abs(res1)), np.max(np.abs(res2)),
                     np.max(np.abs(res3))))


def second_variation_normal(test_profile: Callable[[np.ndarray], np.ndarray],
                            params: PhysParams,
                            interaction: Optional[Interaction] = None,
                            grid: Optional[MomentumGrid] = None) -> float:
    """Second derivative of F at the normal state along alpha = t ghat.

    2 int K^0 |ghat|^2 dp plus twice the interaction quadratic form; a
    negative value certifies instability toward pairing.
    """
    if params.T <= 0:
        raise DomainError("second_variation_normal needs T > 0")
    if interaction is None:
        interaction = ContactInteraction(params.coupling)
    if not isinstance(interaction, ContactInteraction):
        raise DomainError("second variation is implemented for the contact "
                          "interaction only")
    if grid is None:
        grid = momentum_grid(params)
    ghat = np.asarray(test_profile(grid.p), dtype=float)
    t = grid.p ** 2 - params.mu_bar
    k0 = K_delta(t, 0.0, params)
    quad_kernel = 2.0 * grid.integrate(k0 * ghat * ghat)
    total = grid.integrate(ghat)
    quad_int = -interaction.g / math.pi * total * total
    return quad_kernel + quad_int


# ---------------------------------------------------------------------------
# phase decision

_PHASE_TOL_FACTOR = 1e-12

SUPERFLUID = "superfluid"
NORMAL = "normal"
METASTABLE = "normal-with-metastable-solutions"


@dataclass(frozen=True)
class PhaseReport:
    params: PhysParams
    label: str
    solutions: GapSolutionSet
    f_normal: float
    f_best: float                      # min over solutions, = f_normal if none
    delta_best: float = 0.0
    energy_differences: List[float] = field(default_factory=list)


def phase_report(params: PhysParams,
                 interaction: Optional[Interaction] = None,
                 grid: Optional[MomentumGrid] = None) -> PhaseReport:
    """Solve the 1-D gap equation and compare free energies with normal."""
    if interaction is None:
        interaction = ContactInteraction(params.coupling)
    if not isinstance(interaction, ContactInteraction):
        raise DomainError("phase decisions are implemented for the contact "
                          "interaction only")
    sols = solve_gap_1d(params)
    if grid is None:
        scale = max(sols.roots) if sols.roots else 0.0
        grid = momentum_grid(params, delta_scale=scale)
    f_n = free_energy(normal_state(params, grid), params, interaction)
    diffs = []
    for root in sols.roots:
        st = state_from_gap_solution(root, params, grid)
        diffs.append(free_energy_difference(st, params, interaction))
    tol = _PHASE_TOL_FACTOR * max(params.mu_bar ** 1.5, abs(f_n), 1.0)
    if not sols.roots:
        label, best, d_best = NORMAL, 0.0, 0.0
    else:
        k = int(np.argmin(diffs))
        best, d_best = diffs[k], sols.roots[k]
        label = SUPERFLUID if best < -tol else METASTABLE
    return PhaseReport(params=params, label=label, solutions=sols,
                       f_normal=f_n, f_best=f_n + best, delta_best=d_best,
                       energy_differences=diffs)


def phase_decision(params: PhysParams,
                   interaction: Optional[Interaction] = None) -> str:
    """'superfluid', 'normal' or 'normal-with-metastable-solutions'."""
    return phase_report(params, interaction).label
