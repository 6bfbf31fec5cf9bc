"""Associated Laguerre polynomials and factorial arithmetic.

Coefficients of the explicit Laguerre sum alternate in sign, so they are
formed as exact rationals while every factorial involved stays small and
through signed logarithms beyond that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .errors import DomainError

#: largest ``p + alpha`` for which Laguerre coefficients are formed exactly
EXACT_COEFFICIENT_LIMIT = 30

#: largest ``n`` for which :func:`log_factorial` goes through the exact integer
EXACT_FACTORIAL_LIMIT = 20


def _check_index(name: str, value: int) -> int:
    if isinstance(value, bool) or int(value) != value:
        raise DomainError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if value < 0:
        raise DomainError(f"{name} must be non-negative, got {value}")
    return value


def log_factorial(n: int) -> float:
    """Natural logarithm of ``n!``.

    Parameters
    ----------
    n : int
        non-negative integer

    Returns
    -------
    float
        ``ln(n!)``; exact integer factorial for ``n <= 20``, ``lgamma`` beyond

    """
    n = _check_index("n", n)
    if n <= EXACT_FACTORIAL_LIMIT:
        return math.log(math.factorial(n))
    return math.lgamma(n + 1)


@dataclass(frozen=True)
class SignedLogValue:
    """A real number stored as a sign and the log of its magnitude.

    ``sign == 0`` is exactly zero and ``log_magnitude`` is then ignored.
    """

    sign: int
    log_magnitude: float = -math.inf

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise DomainError(f"sign must be -1, 0 or +1, got {self.sign!r}")

    @classmethod
    def from_float(cls, value: float) -> "SignedLogValue":
        if value == 0:
            return cls(0)
        if not math.isfinite(value):
            raise DomainError(f"cannot represent {value!r}")
        return cls(1 if value > 0 else -1, math.log(abs(value)))

    def to_float(self) -> float:
        if self.sign == 0:
            return 0.0
        return self.sign * math.exp(self.log_magnitude)

    def __float__(self) -> float:
        return self.to_float()

    def __neg__(self) -> "SignedLogValue":
        return SignedLogValue(-self.sign, self.log_magnitude)

    def __mul__(self, other: "SignedLogValue") -> "SignedLogValue":
        if not isinstance(other, SignedLogValue):
            return NotImplemented
        if self.sign == 0 or other.sign == 0:
            return SignedLogValue(0)
        return SignedLogValue(self.sign * other.sign,
                              self.log_magnitude + other.log_magnitude)

    def __truediv__(self, other: "SignedLogValue") -> "SignedLogValue":
        if not isinstance(other, SignedLogValue):
            return NotImplemented
        if other.sign == 0:
            raise ZeroDivisionError("division by a zero SignedLogValue")
        if self.sign == 0:
            return SignedLogValue(0)
        return SignedLogValue(self.sign * other.sign,
                              self.log_magnitude - other.log_magnitude)


def signed_log_sum(terms: Iterable[SignedLogValue]) -> SignedLogValue:
    """Sum signed-log terms without overflow.

    Terms are rescaled by the largest magnitude and accumulated with
    :func:`math.fsum`, so cancellation between the rescaled values is exact
    up to the final rounding.
    """
    terms = [t for t in terms if t.sign != 0]
    if not terms:
        return SignedLogValue(0)
    scale = max(t.log_magnitude for t in terms)
    total = math.fsum(t.sign * math.exp(t.log_magnitude - scale) for t in terms)
    if total == 0:
        return SignedLogValue(0)
    return SignedLogValue(1 if total > 0 else -1, math.log(abs(total)) + scale)


def laguerre_coefficients(p: int, alpha: int) -> tuple[float, ...]:
    """Power-series coefficients of ``L_p^alpha``, lowest order first.

    The ``m``-th coefficient is ``(-1)^m (p+alpha)! / ((p-m)! (alpha+m)! m!)``.
    """
    p = _check_index("p", p)
    alpha = _check_index("alpha", alpha)
    if p + alpha <= EXACT_COEFFICIENT_LIMIT:
        top = math.factorial(p + alpha)
        return tuple(
            float(Fraction((-1) ** m * top,
                           math.factorial(p - m) * math.factorial(alpha + m)
                           * math.factorial(m)))
            for m in range(p + 1)
        )
    log_top = log_factorial(p + alpha)
    return tuple(
        (-1) ** m * math.exp(log_top - log_factorial(p - m)
                             - log_factorial(alpha + m) - log_factorial(m))
        for m in range(p + 1)
    )


def _exact_sum(p: int, alpha: int, x: Fraction) -> Fraction:
    p = _check_index("p", p)
    alpha = _check_index("alpha", alpha)
    top = math.factorial(p + alpha)
    return sum(Fraction((-1) ** m * top,
                        math.factorial(p - m) * math.factorial(alpha + m) * math.factorial(m))
               * x ** m for m in range(p + 1))


def assoc_laguerre(p: int, alpha: int, x):
    """Associated Laguerre polynomial ``L_p^alpha(x)`` from its explicit sum.

    Parameters
    ----------
    p : int
        polynomial degree, ``p >= 0``
    alpha : int
        non-negative integer order
    x : float or numpy.ndarray
        finite evaluation points

    Returns
    -------
    float or numpy.ndarray
        polynomial value(s), same shape as ``x``

    Notes
    -----
    A scalar ``x`` with ``p + alpha <= 30`` is summed in exact rational
    arithmetic and rounded once. Arrays go through the three-term
    recurrence ``(n+1) L_{n+1} = (2n+1+alpha-x) L_n - (n+alpha) L_{n-1}``.

    """
    if np.ndim(x) == 0:
        x = float(x)
        if not math.isfinite(x):
            raise DomainError(f"x must be finite, got {x!r}")
        if p + alpha <= EXACT_COEFFICIENT_LIMIT:
            return float(_exact_sum(p, alpha, Fraction(x)))
        return math.fsum(c * x ** m for m, c in enumerate(laguerre_coefficients(p, alpha)))
    p = _check_index("p", p)
    alpha = _check_index("alpha", alpha)
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise DomainError("x must be finite")
    # forward recurrence; the power sum cancels badly on arrays
    prev, cur = np.zeros_like(x), np.ones_like(x)
    for n in range(p):
        prev, cur = cur, ((2 * n + 1 + alpha - x) * cur - (n + alpha) * prev) / (n + 1)
    return cur
