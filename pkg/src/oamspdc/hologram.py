"""Fork-hologram mode conversion.

Only the first diffraction order is modeled, through its action on the
winding number: an input ``LG_{p_in}^{l_in}`` leaves as a superposition of
``LG_{p_out}^{l_in - delta_l}`` over ``p_out``. Input and output share one
waist. Diffraction efficiency is not folded into the weights.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterator, Mapping

import numpy as np

from . import serialize
from .errors import DomainError
from .modes import ModeIndex, lg_field_waist
from .numerics import QuadratureSpec, integrate_halfline


@dataclass(frozen=True)
class HologramSpec:
    """Computer-generated fork grating.

    Parameters
    ----------
    charge_l : int
        fork charge, the ``l`` in the transmittance phase
    phase_depth_delta : float
        phase modulation amplitude in radians, in ``[0, 2 pi]``
    grating_period_Lambda : float
        carrier period far from the fork; ``inf`` removes the carrier
    diffraction_order_m : int
        order in which the beam is collected

    """

    charge_l: int
    phase_depth_delta: float = 2 * math.pi
    grating_period_Lambda: float = 1.0
    diffraction_order_m: int = 1

    def __post_init__(self):
        if not 0 <= self.phase_depth_delta <= 2 * math.pi:
            raise DomainError(f"phase depth must lie in [0, 2 pi], got {self.phase_depth_delta!r}")
        if not self.grating_period_Lambda > 0:
            raise DomainError(f"grating period must be positive, got {self.grating_period_Lambda!r}")

    @property
    def delta_l(self) -> int:
        """Winding change applied in the selected order."""
        return self.diffraction_order_m * self.charge_l


def transmittance(spec: HologramSpec, rho, phi):
    """Complex transmittance ``exp(i delta mod(l phi - 2 pi rho cos(phi) / Lambda, 2 pi) / 2 pi)``."""
    rho = np.asarray(rho, dtype=float)
    phi = np.asarray(phi, dtype=float)
    carrier = 2 * np.pi / spec.grating_period_Lambda
    phase = np.mod(spec.charge_l * phi - carrier * rho * np.cos(phi), 2 * np.pi)
    t = np.exp(1j * spec.phase_depth_delta * phase / (2 * np.pi))
    return t if np.ndim(t) else complex(t)


def first_order_coefficient(p_in: int, l_in: int, delta_l: int, p_out: int,
                            waist_w0: float = 1.0, l_out: int = 0,
                            quadrature: QuadratureSpec | None = None) -> complex:
    """Expansion coefficient of ``LG_{p_out}^{l_out}`` in the first order.

    The azimuthal integral is ``2 pi`` when ``l_out == l_in - delta_l`` and
    zero otherwise; a mismatch therefore returns an exact ``0j``. The radial
    overlap is integrated numerically.
    """
    if l_out != l_in - delta_l:
        return 0j
    mode_in = ModeIndex(l_in, p_in)
    mode_out = ModeIndex(l_out, p_out)

    def integrand(u):
        rho = waist_w0 * u
        # phi = 0 after the azimuthal reduction
        product = (lg_field_waist(mode_out, waist_w0, rho, 0.0).conjugate()
                   * lg_field_waist(mode_in, waist_w0, rho, 0.0))
        return product.real * rho * waist_w0

    return complex(2 * math.pi * integrate_halfline(integrand, quadrature))


@dataclass(frozen=True)
class ConversionTable:
    """Weights ``P(p_in, p_out)`` for a hologram of winding change ``delta_l``
    acting on ``LG_{p_in}^{delta_l}``, collected in ``LG_{p_out}^0``."""

    delta_l: int
    rows: Mapping[tuple[int, int], float] = field(repr=False)

    columns = ("delta_l", "p_in", "p_out", "weight")

    def __post_init__(self):
        object.__setattr__(self, "rows", MappingProxyType(dict(self.rows)))

    def weight(self, p_in: int, p_out: int) -> float:
        return self.rows[(p_in, p_out)]

    def __getitem__(self, key: tuple[int, int]) -> float:
        return self.rows[key]

    @property
    def p_in_max(self) -> int:
        return max(p for p, _ in self.rows)

    @property
    def p_out_max(self) -> int:
        return max(q for _, q in self.rows)

    def records(self) -> Iterator[dict]:
        for (p_in, p_out), w in self.rows.items():
            yield {"delta_l": self.delta_l, "p_in": p_in, "p_out": p_out, "weight": w}

    def to_csv(self) -> str:
        return serialize.to_csv(self.records(), self.columns)

    def to_json(self) -> str:
        meta = {"delta_l": self.delta_l, "p_in_max": self.p_in_max,
                "p_out_max": self.p_out_max}
        return serialize.to_json(meta, self.records())


def identity_table(p_in_max: int, p_out_max: int) -> ConversionTable:
    """Kronecker table standing in for an arm without hologram."""
    return ConversionTable(0, {(i, o): float(i == o)
                               for i in range(p_in_max + 1)
                               for o in range(p_out_max + 1)})


def conversion_table(delta_l: int, p_in_max: int = 2, p_out_max: int = 3,
                     waist_w0: float = 1.0,
                     quadrature: QuadratureSpec | None = None) -> ConversionTable:
    """Weights ``P = |a|^2`` for every ``p_in <= p_in_max``, ``p_out <= p_out_max``.

    The input winding is ``delta_l`` so that the output has winding zero, the
    only one a mono-mode fiber accepts. The radial integrand depends on
    ``|delta_l|`` alone, so ``delta_l`` and ``-delta_l`` give identical tables.
    """
    if p_in_max < 0 or p_out_max < 0:
        raise DomainError("p_in_max and p_out_max must be non-negative")
    rows = {}
    for p_in in range(p_in_max + 1):
        for p_out in range(p_out_max + 1):
            a = first_order_coefficient(p_in, delta_l, delta_l, p_out,
                                        waist_w0=waist_w0, quadrature=quadrature)
            rows[(p_in, p_out)] = abs(a) ** 2
    return ConversionTable(delta_l, rows)
