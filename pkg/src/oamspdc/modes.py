"""Laguerre-Gaussian modes.

Radial profiles are built in the dimensionless radius ``u = rho / w`` and
the waist only enters as a scale factor. Phase conventions: azimuthal
``exp(-i l phi)``, Gouy ``exp(-i (2p + |l| + 1) psi)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .specfun import assoc_laguerre, log_factorial


@dataclass(frozen=True)
class ModeIndex:
    """Winding number ``l`` and radial index ``p`` of one LG mode."""

    l: int
    p: int = 0

    def __post_init__(self):
        for name in ("l", "p"):
            value = getattr(self, name)
            if isinstance(value, bool) or int(value) != value:
                raise DomainError(f"{name} must be an integer, got {value!r}")
        if self.p < 0:
            raise DomainError(f"radial index p must be non-negative, got {self.p}")


@dataclass(frozen=True)
class BeamGeometry:
    """Gaussian-beam parameters at axial position ``z``.

    Lengths share whatever unit ``waist_w0`` is given in; ``wavenumber_k`` is
    in the inverse of that unit.
    """

    waist_w0: float
    wavenumber_k: float
    z: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.waist_w0) and self.waist_w0 > 0):
            raise DomainError(f"waist must be positive, got {self.waist_w0!r}")
        if not (math.isfinite(self.wavenumber_k) and self.wavenumber_k > 0):
            raise DomainError(f"wavenumber must be positive, got {self.wavenumber_k!r}")
        if not math.isfinite(self.z):
            raise DomainError(f"z must be finite, got {self.z!r}")

    @property
    def rayleigh_range(self) -> float:
        return 0.5 * self.wavenumber_k * self.waist_w0 ** 2

    @property
    def spot_size(self) -> float:
        return self.waist_w0 * math.sqrt(1.0 + (self.z / self.rayleigh_range) ** 2)

    @property
    def curvature_radius(self) -> float:
        """Wavefront radius of curvature; ``inf`` (flat) at the waist."""
        if self.z == 0:
            return math.inf
        return self.z * (1.0 + (self.rayleigh_range / self.z) ** 2)

    @property
    def gouy_phase(self) -> float:
        return math.atan(self.z / self.rayleigh_range)


def lg_norm(l: int, p: int) -> float:
    """``sqrt(2 p! / (pi (|l| + p)!))``, the LG normalization prefactor."""
    return math.sqrt(2.0 / math.pi) * math.exp(
        0.5 * (log_factorial(p) - log_factorial(abs(l) + p)))


def lg_radial(l: int, p: int, u):
    """Dimensionless radial profile of ``LG_p^l``.

    ``w * lg_radial(l, p, rho / w)`` is the field modulus at radius ``rho``
    for spot size ``w``; the profile satisfies
    ``2 pi * int_0^inf lg_radial(l, p, u)**2 u du = 1``.
    """
    u = np.asarray(u, dtype=float) if np.ndim(u) else float(u)
    a = abs(l)
    x = 2.0 * u * u
    return (lg_norm(l, p) * (math.sqrt(2.0) * u) ** a
            * assoc_laguerre(p, a, x) * np.exp(-u * u))


def _check_coordinates(rho, phi):
    if not (np.all(np.isfinite(rho)) and np.all(np.isfinite(phi))):
        raise DomainError("rho and phi must be finite")
    if np.any(np.asarray(rho) < 0):
        raise DomainError("rho must be non-negative")


def lg_field_waist(mode: ModeIndex, waist_w0: float, rho, phi):
    """Complex LG field in the waist plane.

    Parameters
    ----------
    mode : ModeIndex
        winding number and radial index
    waist_w0 : float
        beam waist
    rho, phi : float or numpy.ndarray
        polar coordinates, ``rho >= 0``

    Returns
    -------
    complex or numpy.ndarray
        field amplitude, normalized to unit power over the plane

    """
    if not (math.isfinite(waist_w0) and waist_w0 > 0):
        raise DomainError(f"waist must be positive, got {waist_w0!r}")
    _check_coordinates(rho, phi)
    radial = lg_radial(mode.l, mode.p, np.asarray(rho, dtype=float) / waist_w0) / waist_w0
    field = radial * np.exp(-1j * mode.l * np.asarray(phi, dtype=float))
    return field if np.ndim(field) else complex(field)


def lg_field(mode: ModeIndex, geom: BeamGeometry, rho, phi):
    """Complex LG field at the axial position ``geom.z``.

    Includes the wavefront-curvature and Gouy phases; at ``z = 0`` both
    phase factors are exactly one and the result equals
    :func:`lg_field_waist`.
    """
    _check_coordinates(rho, phi)
    w = geom.spot_size
    rho_arr = np.asarray(rho, dtype=float)
    radial = lg_radial(mode.l, mode.p, rho_arr / w) / w
    if geom.z == 0:
        curvature = 0.0
    else:
        curvature = geom.wavenumber_k * rho_arr ** 2 / (2.0 * geom.curvature_radius)
    gouy = (2 * mode.p + abs(mode.l) + 1) * geom.gouy_phase
    phase = np.exp(-1j * (curvature + gouy + mode.l * np.asarray(phi, dtype=float)))
    field = radial * phase
    return field if np.ndim(field) else complex(field)
