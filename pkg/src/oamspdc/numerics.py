"""Radial quadrature with node doubling.

Both rules are Gauss-Legendre. The half-line is mapped onto ``[0, 1)``
through ``u = s / (1 - s)``; every integrand in this package decays like a
Gaussian, so the mapped integrand is smooth up to ``s = 1``. Azimuthal
integrals never reach this module, callers reduce them by selection rules.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import ConvergenceError, DomainError

#: below this magnitude the convergence test is absolute rather than relative
ABSOLUTE_REGIME = 1e-12


@dataclass(frozen=True)
class QuadratureSpec:
    """Node count and stopping rule for the doubling quadratures.

    Parameters
    ----------
    base_node_count : int
        Gauss-Legendre nodes of the first pass, at least 16
    relative_tolerance : float
        stop once a doubling moves the estimate by less than this, in
        ``(0, 1e-3]``
    max_doublings : int
        doublings allowed before giving up

    """

    base_node_count: int = 32
    relative_tolerance: float = 1e-10
    max_doublings: int = 6

    def __post_init__(self):
        if int(self.base_node_count) != self.base_node_count or self.base_node_count < 16:
            raise DomainError(f"base_node_count must be an integer >= 16, got {self.base_node_count!r}")
        if not 0 < self.relative_tolerance <= 1e-3:
            raise DomainError(f"relative_tolerance must lie in (0, 1e-3], got {self.relative_tolerance!r}")
        if int(self.max_doublings) != self.max_doublings or self.max_doublings < 1:
            raise DomainError(f"max_doublings must be a positive integer, got {self.max_doublings!r}")


DEFAULT_QUADRATURE = QuadratureSpec()


@lru_cache(maxsize=None)
def _legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def _evaluate(f: Callable, x: np.ndarray) -> np.ndarray:
    y = np.asarray(f(x), dtype=float)
    return np.broadcast_to(y, x.shape)


def gauss_legendre(f: Callable, a: float, b: float, n: int) -> float:
    """Single ``n``-node Gauss-Legendre estimate of the integral of f over [a, b].

    ``f`` is called once with the array of nodes.
    """
    x, w = _legendre(n)
    half = 0.5 * (b - a)
    t = half * x + 0.5 * (a + b)
    return half * math.fsum(w * _evaluate(f, t))


def _halfline_pass(f: Callable, n: int) -> float:
    x, w = _legendre(n)
    s = 0.5 * (x + 1.0)
    u = s / (1.0 - s)
    jacobian = 0.5 / (1.0 - s) ** 2
    return math.fsum(w * jacobian * _evaluate(f, u))


def converged(previous: float, current: float, tol: float) -> bool:
    """Doubling stopping rule: relative above ``ABSOLUTE_REGIME``, absolute below."""
    change = abs(current - previous)
    if abs(current) > ABSOLUTE_REGIME:
        return change < tol * abs(current)
    return change < tol


def _doubling(estimate: Callable[[int], float], spec: QuadratureSpec) -> float:
    n = spec.base_node_count
    previous = estimate(n)
    for _ in range(spec.max_doublings):
        n *= 2
        current = estimate(n)
        if converged(previous, current, spec.relative_tolerance):
            return current
        previous = current
    raise ConvergenceError(
        f"no convergence to {spec.relative_tolerance:g} after "
        f"{spec.max_doublings} doublings ({n} nodes)"
    )


def integrate_halfline(f: Callable, spec: QuadratureSpec | None = None) -> float:
    """Integral of ``f(u)`` over ``[0, inf)``.

    Parameters
    ----------
    f : callable
        vectorized real integrand, decaying at least like a polynomial times
        ``exp(-u**2)``
    spec : QuadratureSpec, optional
        node count and tolerance, :data:`DEFAULT_QUADRATURE` if omitted

    Returns
    -------
    float
        the converged integral

    Raises
    ------
    ConvergenceError
        if the estimate is still moving after ``spec.max_doublings`` doublings

    """
    spec = spec or DEFAULT_QUADRATURE
    return _doubling(lambda n: _halfline_pass(f, n), spec)


def integrate_interval(f: Callable, a: float, b: float,
                       spec: QuadratureSpec | None = None) -> float:
    """Integral of ``f`` over the finite interval ``[a, b]``.

    Same convergence contract as :func:`integrate_halfline`; ``a > b`` is a
    :class:`DomainError`.
    """
    spec = spec or DEFAULT_QUADRATURE
    if not (math.isfinite(a) and math.isfinite(b)):
        raise DomainError("interval endpoints must be finite")
    if a > b:
        raise DomainError(f"empty interval: a={a!r} > b={b!r}")
    if a == b:
        return 0.0
    return _doubling(lambda n: gauss_legendre(f, a, b, n), spec)
