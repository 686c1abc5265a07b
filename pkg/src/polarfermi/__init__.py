"""Phase diagram of the spin-imbalanced BCS Fermi gas.

Subpackages:

* ``core``       -- pairing kernels K^Delta / K_tilde and the minimizer b(c)
* ``kappa``      -- the universal phase-boundary functions kappa^{i,o,g}
* ``mlimits``    -- finite-(T, delta_mu) integrals m, m_tilde, m_bar and
                    their closed-form low-temperature asymptotics
* ``spectral``   -- Fermi-sphere operator quantities for radial potentials
* ``toy1d``      -- 1-D contact-interaction gap equation and its curves
* ``functional`` -- the BCS free-energy functional and phase decisions
* ``cli``        -- command-line front end
"""

from .core import PhysParams, K_delta, K_tilde, b_of_c, f_val, upsilon0

__version__ = "0.1.0"

__all__ = [
    "PhysParams",
    "K_delta",
    "K_tilde",
    "b_of_c",
    "f_val",
    "upsilon0",
    "__version__",
]
