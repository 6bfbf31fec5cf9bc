"""Orbital-angular-momentum mode amplitudes of down-converted photon pairs.

Submodules
----------
specfun
    associated Laguerre polynomials and overflow-safe factorial arithmetic
modes
    Laguerre-Gaussian field evaluation
numerics
    radial quadrature with node doubling
spdc
    relative two-photon mode amplitudes
hologram
    fork-hologram first-order mode conversion weights
fiber
    mono-mode fiber coupling efficiencies
detection
    relative joint detection probabilities
"""

from .errors import ConvergenceError, DomainError

__version__ = "0.1.0"

__all__ = ["ConvergenceError", "DomainError", "__version__"]
