"""Mono-mode fiber acceptance of LG modes.

The guided mode is replaced by a Gaussian of waist ``d/2`` and the input
beam waist is matched to it. All three overlap integrals of the coupling
efficiency are restricted to the detection disk ``rho <= d/2``; with the
numerator alone restricted the ``p = 1`` ratio would come out near 0.098
instead of 0.26.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import serialize
from .errors import ConvergenceError, DomainError
from .modes import ModeIndex, lg_field_waist
from .numerics import QuadratureSpec, integrate_halfline, integrate_interval
from .specfun import assoc_laguerre

#: radial orders for which the closed-form efficiency is used
ANALYTIC_P_MAX = 3

#: closed form and quadrature must agree to this, absolutely
CROSS_CHECK_TOLERANCE = 1e-9


@dataclass(frozen=True)
class FiberSpec:
    """Gaussian model of a mono-mode fiber of mode field diameter ``d``."""

    mode_field_diameter_d: float
    center_amplitude_E0: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.mode_field_diameter_d) and self.mode_field_diameter_d > 0):
            raise DomainError(f"MFD must be positive, got {self.mode_field_diameter_d!r}")
        if not self.center_amplitude_E0 > 0:
            raise DomainError(f"E0 must be positive, got {self.center_amplitude_E0!r}")

    @property
    def mode_waist(self) -> float:
        return self.mode_field_diameter_d / 2


def fiber_mode(spec: FiberSpec, rho):
    """Fiber field ``E0 exp(-rho^2 / w^2)``."""
    return spec.center_amplitude_E0 * np.exp(-(np.asarray(rho, dtype=float) / spec.mode_waist) ** 2)


def _lower_gamma_parts(k: int) -> tuple[Fraction, Fraction]:
    """``int_0^2 t^k e^-t dt = A - e^-2 B`` with exact rationals A and B."""
    a = Fraction(math.factorial(k))
    b = sum(Fraction(math.factorial(k) * 2 ** j, math.factorial(j)) for j in range(k + 1))
    return a, b


def _analytic_efficiency(p: int) -> float:
    # in t = 2 rho^2 / w^2 the disk is t in [0, 2] and LG_p^0 E ~ L_p(t) e^-t
    e2 = math.exp(-2.0)
    if p == 0:
        numerator = 1.0 - e2
    else:
        # int_0^x L_p(t) e^-t dt = x e^-x L_{p-1}^1(x) / p
        numerator = 2.0 * e2 * assoc_laguerre(p - 1, 1, 2.0) / p
    coeffs = [Fraction((-1) ** m * math.comb(p, m), math.factorial(m)) for m in range(p + 1)]
    a_sum, b_sum = Fraction(0), Fraction(0)
    for i, ci in enumerate(coeffs):
        for j, cj in enumerate(coeffs):
            a, b = _lower_gamma_parts(i + j)
            a_sum += ci * cj * a
            b_sum += ci * cj * b
    mode_norm = float(a_sum) - e2 * float(b_sum)
    return numerator ** 2 / (mode_norm * (1.0 - e2))


def _disk_integrals(p: int, l: int, w: float, fiber: FiberSpec,
                    quadrature: QuadratureSpec | None, full_plane: bool):
    mode = ModeIndex(l, p)

    def cross(rho):
        return (lg_field_waist(mode, w, rho, 0.0).conjugate() * fiber_mode(fiber, rho)).real * rho

    def beam(rho):
        return abs(lg_field_waist(mode, w, rho, 0.0)) ** 2 * rho

    def guide(rho):
        return fiber_mode(fiber, rho) ** 2 * rho

    if full_plane:
        parts = [w * integrate_halfline(lambda u, g=g: g(w * u), quadrature)
                 for g in (cross, beam, guide)]
    else:
        parts = [integrate_interval(g, 0.0, w, quadrature) for g in (cross, beam, guide)]
    # the 2 pi azimuthal factors cancel between numerator and denominator
    return parts


def _quadrature_efficiency(p, w, fiber, quadrature, full_plane=False) -> float:
    numerator, beam, guide = _disk_integrals(p, 0, w, fiber, quadrature, full_plane)
    return numerator ** 2 / (beam * guide)


def coupling_efficiency(l: int, p: int, beam_waist: float, fiber: FiberSpec,
                        quadrature: QuadratureSpec | None = None,
                        full_plane: bool = False) -> float:
    """Relative fiber acceptance ``Q`` of ``LG_p^l``.

    Parameters
    ----------
    l, p : int
        mode indices
    beam_waist : float
        input beam waist; must equal ``fiber.mode_waist``
    fiber : FiberSpec
        fiber model
    quadrature : QuadratureSpec, optional
        settings for the numerical path
    full_plane : bool
        integrate over the whole plane instead of the detection disk

    Returns
    -------
    float
        efficiency relative to ``Q(0, 0)``; exactly 0 for ``l != 0``

    Notes
    -----
    For ``p <= ANALYTIC_P_MAX`` on the disk the closed form is returned and
    checked against quadrature.

    """
    if not math.isclose(beam_waist, fiber.mode_waist, rel_tol=1e-12):
        raise DomainError(f"beam waist {beam_waist!r} does not match fiber mode waist "
                          f"{fiber.mode_waist!r}")
    if p < 0:
        raise DomainError(f"radial index must be non-negative, got {p}")
    if l != 0:
        return 0.0
    w = fiber.mode_waist
    reference = _quadrature_efficiency(0, w, fiber, quadrature, full_plane)
    numeric = _quadrature_efficiency(p, w, fiber, quadrature, full_plane) / reference
    if full_plane or p > ANALYTIC_P_MAX:
        return numeric
    exact = _analytic_efficiency(p) / _analytic_efficiency(0)
    if abs(exact - numeric) > CROSS_CHECK_TOLERANCE:
        raise ConvergenceError(f"Q_{p}: closed form {exact!r} and quadrature {numeric!r} disagree")
    return exact


def relative_q_vector(p_max: int, fiber: FiberSpec,
                      quadrature: QuadratureSpec | None = None) -> tuple[float, ...]:
    """``(Q_0, ..., Q_{p_max})`` for ``l = 0``, normalized to ``Q_0 = 1``."""
    if p_max < 0:
        raise DomainError(f"p_max must be non-negative, got {p_max}")
    return tuple(coupling_efficiency(0, p, fiber.mode_waist, fiber, quadrature)
                 for p in range(p_max + 1))


def q_vector_rows(q: tuple[float, ...]):
    for p, value in enumerate(q):
        yield {"p": p, "q": value, "q_display": serialize.display(value)}
