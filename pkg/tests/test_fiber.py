import math

import numpy as np
import pytest
from scipy import integrate
from scipy.special import eval_genlaguerre

from oamspdc.errors import DomainError
from oamspdc.fiber import (FiberSpec, _analytic_efficiency, _quadrature_efficiency,
                           coupling_efficiency, fiber_mode, relative_q_vector)

E2 = math.exp(-2)


def disk_oracle(p):
    # t = 2 rho^2 / w^2 maps the disk onto [0, 2]
    num = integrate.quad(lambda t: eval_genlaguerre(p, 0, t) * math.exp(-t), 0, 2, epsabs=1e-14)[0]
    beam = integrate.quad(lambda t: eval_genlaguerre(p, 0, t) ** 2 * math.exp(-t), 0, 2)[0]
    return num ** 2 / (beam * (1 - E2))


def test_spec():
    f = FiberSpec(9.2, 3.0)
    assert f.mode_waist == 4.6
    with pytest.raises(DomainError):
        FiberSpec(0.0)


def test_fiber_mode():
    f = FiberSpec(4.0, 2.5)
    assert fiber_mode(f, 0.0) == 2.5
    assert fiber_mode(f, 2.0) == pytest.approx(2.5 / math.e, rel=1e-15)
    values = fiber_mode(f, np.linspace(0, 6, 50))
    assert np.all(np.diff(values) < 0)


def test_nonzero_winding_is_exactly_zero(fiber):
    assert coupling_efficiency(1, 0, fiber.mode_waist, fiber) == 0.0
    assert coupling_efficiency(-2, 3, fiber.mode_waist, fiber) == 0.0


def test_normalization(fiber):
    assert coupling_efficiency(0, 0, fiber.mode_waist, fiber) == 1.0


def test_second_order_zero(fiber):
    assert abs(coupling_efficiency(0, 2, fiber.mode_waist, fiber)) < 1e-10
    assert abs(_quadrature_efficiency(2, fiber.mode_waist, fiber, None)) < 1e-10


def test_waist_mismatch(fiber):
    with pytest.raises(DomainError):
        coupling_efficiency(0, 1, 1.1 * fiber.mode_waist, fiber)


def test_q1_closed_form(fiber):
    expected = (2 * E2) ** 2 / ((1 - E2) * (1 - 5 * E2))
    assert coupling_efficiency(0, 1, fiber.mode_waist, fiber) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("p", range(6))
def test_matches_scipy_oracle(fiber, p):
    ours = coupling_efficiency(0, p, fiber.mode_waist, fiber)
    assert ours == pytest.approx(disk_oracle(p) / disk_oracle(0), rel=1e-9, abs=1e-12)


@pytest.mark.parametrize("p", range(4))
def test_analytic_and_quadrature_agree(fiber, p):
    w = fiber.mode_waist
    numeric = _quadrature_efficiency(p, w, fiber, None) / _quadrature_efficiency(0, w, fiber, None)
    assert abs(numeric - _analytic_efficiency(p) / _analytic_efficiency(0)) < 1e-9


def test_published_vector(fiber):
    q = relative_q_vector(3, fiber)
    for ours, ref in zip(q, (1, 0.263, 0, 0.036)):
        assert abs(ours - ref) <= 0.002
    assert q[0] == 1.0


def test_trivial_vector(fiber):
    assert relative_q_vector(0, fiber) == (1.0,)


def test_scale_invariance():
    a = relative_q_vector(5, FiberSpec(9.2))
    b = relative_q_vector(5, FiberSpec(4.6))
    for x, y in zip(a, b):
        assert x == pytest.approx(y, rel=1e-9, abs=1e-12)


def test_bounded_by_fundamental(fiber):
    q = relative_q_vector(3, fiber)
    assert all(v <= q[0] for v in q)


def test_full_plane_fundamental_is_maximum(fiber):
    full = [coupling_efficiency(0, p, fiber.mode_waist, fiber, full_plane=True) for p in range(5)]
    assert full[0] == 1.0
    assert all(v <= full[0] for v in full)
    # with an unrestricted plane only the matched Gaussian couples
    assert max(full[1:]) < 1e-12
