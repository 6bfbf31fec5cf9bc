"""Relative amplitudes of signal/idler LG mode pairs from down-conversion.

A thin crystal pumped by ``LG_0^{l0}`` emits the pair ``(l1, p1; l2, p2)``
with amplitude proportional to the transverse overlap of the pump with the
conjugates of both down-converted modes. Pump, signal and idler share one
waist and are taken at the waist plane. Every amplitude is reported relative
to ``C(0,0;0,0)`` for a Gaussian pump, whatever the pump winding.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Iterator, Mapping

from . import serialize
from .errors import DomainError
from .modes import ModeIndex, lg_field_waist
from .numerics import QuadratureSpec, integrate_halfline
from .specfun import SignedLogValue, log_factorial, signed_log_sum

_LOG_TWO_THIRDS = math.log(2.0 / 3.0)


@dataclass(frozen=True)
class PumpSpec:
    """Pump mode ``LG_{p0}^{l0}``; only ``p0 = 0`` is supported."""

    l0: int = 0
    p0: int = 0
    waist_w0: float = 1.0

    def __post_init__(self):
        if self.p0 != 0:
            raise DomainError(f"only p0 = 0 pumps are supported, got p0={self.p0}")
        if not (math.isfinite(self.waist_w0) and self.waist_w0 > 0):
            raise DomainError(f"waist must be positive, got {self.waist_w0!r}")


def _check_mode(l1, p1, l2, p2, l0):
    for name, value in (("l1", l1), ("l2", l2), ("l0", l0), ("p1", p1), ("p2", p2)):
        if isinstance(value, bool) or int(value) != value:
            raise DomainError(f"{name} must be an integer, got {value!r}")
    if p1 < 0 or p2 < 0:
        raise DomainError(f"radial indices must be non-negative, got p1={p1}, p2={p2}")
    if l1 + l2 != l0:
        raise DomainError(f"OAM not conserved: l1 + l2 = {l1 + l2} != l0 = {l0}")


def _half_order(m, n, a1, a2, a0):
    twice = 2 * m + 2 * n + a1 + a2 + a0
    assert twice % 2 == 0, "odd overlap order although OAM is conserved"
    return twice // 2


def _factorial_exponents(n: int) -> Counter:
    """Prime exponents of ``n!`` (Legendre's formula)."""
    exps = Counter()
    sieve = [True] * (n + 1)
    for q in range(2, n + 1):
        if not sieve[q]:
            continue
        for multiple in range(q * q, n + 1, q):
            sieve[multiple] = False
        e, power = 0, q
        while power <= n:
            e += n // power
            power *= q
        exps[q] = e
    return exps


def _split_square_root(numer: list[int], denom: list[int]) -> tuple[Fraction, int]:
    """Write ``sqrt(prod(k!) / prod(j!))`` as ``r * sqrt(s)`` with rational
    ``r`` and squarefree integer ``s``."""
    exps = Counter()
    for n in numer:
        exps.update(_factorial_exponents(n))
    for n in denom:
        exps.subtract(_factorial_exponents(n))
    rational = Fraction(1)
    radicand = 1
    for q, e in exps.items():
        half, odd = divmod(e, 2)
        rational *= Fraction(q) ** half
        if odd:
            radicand *= q
    return rational, radicand


def _closed_form_exact(l1, p1, l2, p2, l0) -> float:
    a1, a2, a0 = abs(l1), abs(l2), abs(l0)
    f = math.factorial
    total = Fraction(0)
    for m in range(p1 + 1):
        for n in range(p2 + 1):
            k = _half_order(m, n, a1, a2, a0)
            term = Fraction(2 ** k * f(k), 3 ** k * f(p1 - m) * f(p2 - n)
                            * f(a1 + m) * f(a2 + n) * f(m) * f(n))
            total += term if (m + n) % 2 == 0 else -term
    rational, radicand = _split_square_root([p1, p2, a1 + p1, a2 + p2], [a0])
    return float(total * rational) * math.sqrt(radicand)


def _closed_form_log(l1, p1, l2, p2, l0) -> float:
    a1, a2, a0 = abs(l1), abs(l2), abs(l0)
    lf = log_factorial
    log_root = 0.5 * (lf(p1) + lf(p2) + lf(a1 + p1) + lf(a2 + p2) - lf(a0))
    terms = []
    for m in range(p1 + 1):
        for n in range(p2 + 1):
            k = _half_order(m, n, a1, a2, a0)
            log_mag = (k * _LOG_TWO_THIRDS + lf(k) + log_root
                       - lf(p1 - m) - lf(p2 - n) - lf(a1 + m) - lf(a2 + n)
                       - lf(m) - lf(n))
            terms.append(SignedLogValue(-1 if (m + n) % 2 else 1, log_mag))
    return signed_log_sum(terms).to_float()


def amplitude_closed_form(l1: int, p1: int, l2: int, p2: int, l0: int = 0,
                          method: str = "exact") -> float:
    """Relative pair amplitude ``C(l1, p1; l2, p2)`` from the double sum.

    Parameters
    ----------
    l1, p1 : int
        signal winding number and radial index
    l2, p2 : int
        idler winding number and radial index
    l0 : int
        pump winding number; ``l1 + l2 == l0`` is required
    method : {"exact", "log"}
        ``"exact"`` sums exact rationals and rounds once; ``"log"`` sums
        signed logarithms and loses about ``eps * max|term|`` to cancellation

    Returns
    -------
    float
        amplitude relative to ``C(0,0;0,0)`` of a Gaussian pump

    Notes
    -----
    The pump enters with its unit-power normalization, ``1/sqrt(|l0|!)``,
    which is what makes the sum agree with :func:`amplitude_quadrature` for
    every pump winding. The terms alternate and grow much faster than the
    result (at ``l = 20, p1 = p2 = 12`` the log path is already 3% off), so
    the exact path is the default at every order.

    """
    _check_mode(l1, p1, l2, p2, l0)
    if method == "exact":
        return _closed_form_exact(l1, p1, l2, p2, l0)
    if method == "log":
        return _closed_form_log(l1, p1, l2, p2, l0)
    raise DomainError(f"unknown method {method!r}")


def _overlap(l1, p1, l2, p2, l0, waist, quadrature) -> float:
    pump = ModeIndex(l0, 0)
    signal = ModeIndex(l1, p1)
    idler = ModeIndex(l2, p2)

    def integrand(u):
        rho = waist * u
        # phi = 0: every factor is real
        product = (lg_field_waist(pump, waist, rho, 0.0)
                   * lg_field_waist(signal, waist, rho, 0.0).conjugate()
                   * lg_field_waist(idler, waist, rho, 0.0).conjugate())
        return product.real * rho * waist

    return 2.0 * math.pi * integrate_halfline(integrand, quadrature)


def amplitude_quadrature(l1: int, p1: int, l2: int, p2: int,
                         pump: PumpSpec | None = None,
                         quadrature: QuadratureSpec | None = None) -> float:
    """Relative pair amplitude from the transverse overlap integral.

    The azimuthal integral is ``2 pi`` when ``l1 + l2 == pump.l0`` and the
    radial one is done numerically; the result is divided by the same
    overlap for ``(0,0;0,0)`` under a Gaussian pump of the same waist. This
    is the independent check on :func:`amplitude_closed_form`.
    """
    pump = pump or PumpSpec()
    _check_mode(l1, p1, l2, p2, pump.l0)
    anchor = _overlap(0, 0, 0, 0, 0, pump.waist_w0, quadrature)
    return _overlap(l1, p1, l2, p2, pump.l0, pump.waist_w0, quadrature) / anchor


def pair_weight(l1: int, p1: int, l2: int, p2: int, l0: int = 0) -> float:
    """Relative probability ``|C|^2`` of detecting the pair."""
    return amplitude_closed_form(l1, p1, l2, p2, l0) ** 2


Key = tuple[int, int, int, int]


@dataclass(frozen=True)
class AmplitudeTable:
    """Relative amplitudes keyed by ``(l1, p1, l2, p2)``."""

    pump: PumpSpec
    l_max: int
    p_max: int
    entries: Mapping[Key, float] = field(repr=False)

    columns = ("l1", "p1", "l2", "p2", "amplitude", "weight")

    def __post_init__(self):
        for (l1, _, l2, _) in self.entries:
            if l1 + l2 != self.pump.l0:
                raise DomainError(f"non-conserving key l1={l1}, l2={l2} for l0={self.pump.l0}")
        object.__setattr__(self, "entries", MappingProxyType(dict(self.entries)))

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, key: Key) -> float:
        return self.entries[key]

    def amplitude(self, l1, p1, l2, p2) -> float:
        return self.entries[(l1, p1, l2, p2)]

    def weight(self, l1, p1, l2, p2) -> float:
        return self.entries[(l1, p1, l2, p2)] ** 2

    def rows(self) -> Iterator[dict]:
        for (l1, p1, l2, p2), c in self.entries.items():
            yield {"l1": l1, "p1": p1, "l2": l2, "p2": p2,
                   "amplitude": c, "weight": c * c}

    def meta(self) -> dict:
        return {"l0": self.pump.l0, "p0": self.pump.p0,
                "l_max": self.l_max, "p_max": self.p_max}

    def to_csv(self) -> str:
        return serialize.to_csv(self.rows(), self.columns)

    def to_json(self) -> str:
        return serialize.to_json(self.meta(), self.rows())


def build_state_table(pump: PumpSpec | None = None, l_max: int = 2,
                      p_max: int = 2) -> AmplitudeTable:
    """Closed-form amplitudes for ``|l1| <= l_max`` and ``p1, p2 <= p_max``.

    The idler winding is fixed by conservation, ``l2 = l0 - l1``. Rows are
    ordered by ``l1``, then ``p1``, then ``p2``.
    """
    pump = pump or PumpSpec()
    if l_max < 0 or p_max < 0:
        raise DomainError("l_max and p_max must be non-negative")
    entries = {}
    for l1 in range(-l_max, l_max + 1):
        l2 = pump.l0 - l1
        for p1 in range(p_max + 1):
            for p2 in range(p_max + 1):
                entries[(l1, p1, l2, p2)] = amplitude_closed_form(l1, p1, l2, p2, pump.l0)
    return AmplitudeTable(pump, l_max, p_max, entries)
