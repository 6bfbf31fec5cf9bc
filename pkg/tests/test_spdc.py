import json
import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from oamspdc.errors import DomainError
from oamspdc.spdc import (AmplitudeTable, PumpSpec, amplitude_closed_form,
                          amplitude_quadrature, build_state_table, pair_weight)


def hand_sum(l1, p1, l2, p2, l0):
    """Double sum written out term by term in 60-digit arithmetic, pump
    normalized to unit power. Returns the value and the largest term."""
    a1, a2, a0 = abs(l1), abs(l2), abs(l0)
    f = mpmath.factorial
    with mpmath.workdps(60):
        terms = []
        for m in range(p1 + 1):
            for n in range(p2 + 1):
                k = (2 * m + 2 * n + a1 + a2 + a0) // 2
                terms.append(mpmath.mpf(2) ** k / mpmath.mpf(3) ** k * (-1) ** (m + n)
                             * mpmath.sqrt(f(p1) * f(p2) * f(a1 + p1) * f(a2 + p2) / f(a0))
                             / (f(p1 - m) * f(p2 - n) * f(a1 + m) * f(a2 + n) * f(m) * f(n))
                             * f(k))
        return float(mpmath.fsum(terms)), float(max(abs(t) for t in terms))


def close(a, b, rel):
    # relative above 1e-12, absolute below (exact zeros)
    return abs(a - b) <= rel * (abs(b) if abs(b) > 1e-12 else 1.0)


def test_anchor():
    assert amplitude_closed_form(0, 0, 0, 0, 0) == 1.0
    assert amplitude_quadrature(0, 0, 0, 0) == pytest.approx(1.0, rel=1e-12)


@pytest.mark.parametrize("l", range(7))
def test_geometric_law_exact(l):
    assert amplitude_closed_form(l, 0, -l, 0, 0) == float(Fraction(2 ** l, 3 ** l))


def test_hand_expanded_values():
    # m = 0 term 1, m = 1 term -2/3
    assert amplitude_closed_form(0, 1, 0, 0, 0) == pytest.approx(1 / 3, rel=1e-15)
    # 1 - 2/3 - 2/3 + (2/3)^2 * 2!
    assert amplitude_closed_form(0, 1, 0, 1, 0) == pytest.approx(5 / 9, rel=1e-15)
    assert amplitude_quadrature(0, 1, 0, 0) == pytest.approx(1 / 3, rel=1e-9)
    assert amplitude_quadrature(0, 1, 0, 1) == pytest.approx(5 / 9, rel=1e-9)
    assert amplitude_quadrature(1, 0, -1, 0) == pytest.approx(2 / 3, rel=1e-9)


def test_quadrature_oracle_example():
    assert amplitude_quadrature(2, 1, -2, 1) == pytest.approx(
        amplitude_closed_form(2, 1, -2, 1, 0), rel=1e-9)


@pytest.mark.parametrize("l0", [-2, -1, 0, 1, 2, 3])
def test_matches_hand_sum(l0):
    for l1 in range(-3, 4):
        for p1 in range(4):
            for p2 in range(4):
                ours = amplitude_closed_form(l1, p1, l0 - l1, p2, l0)
                assert close(ours, hand_sum(l1, p1, l0 - l1, p2, l0)[0], 1e-14)


def test_conservation_violation_is_error():
    with pytest.raises(DomainError):
        amplitude_closed_form(1, 0, 1, 0, 0)
    with pytest.raises(DomainError):
        amplitude_quadrature(1, 0, 0, 0, PumpSpec(0))
    with pytest.raises(DomainError):
        pair_weight(2, 0, 0, 0, 0)


def test_pump_validation():
    with pytest.raises(DomainError):
        PumpSpec(0, p0=1)
    with pytest.raises(DomainError):
        PumpSpec(0, waist_w0=0.0)


@pytest.mark.parametrize("l0", [0, 1, 2])
def test_oracle_equivalence(l0):
    pump = PumpSpec(l0)
    for l1 in range(-3, 4):
        for p1 in range(4):
            for p2 in range(4):
                c = amplitude_closed_form(l1, p1, l0 - l1, p2, l0)
                q = amplitude_quadrature(l1, p1, l0 - l1, p2, pump)
                assert close(q, c, 1e-8)


def test_oracle_independent_of_waist():
    a = amplitude_quadrature(2, 1, -1, 2, PumpSpec(1, waist_w0=0.3))
    b = amplitude_quadrature(2, 1, -1, 2, PumpSpec(1, waist_w0=7.0))
    assert a == pytest.approx(b, rel=1e-9)


def test_symmetries_exact():
    for l in range(4):
        for p1 in range(4):
            for p2 in range(4):
                c = amplitude_closed_form(l, p1, -l, p2)
                assert c == amplitude_closed_form(-l, p1, l, p2)
                assert c == amplitude_closed_form(l, p2, -l, p1)
                assert c == amplitude_closed_form(-l, p2, l, p1)


def test_symmetries_oracle():
    for l, p1, p2 in [(1, 0, 2), (2, 1, 3), (3, 2, 0)]:
        ref = amplitude_quadrature(l, p1, -l, p2)
        for args in [(-l, p1, l, p2), (l, p2, -l, p1), (-l, p2, l, p1)]:
            assert amplitude_quadrature(*args) == pytest.approx(ref, rel=1e-9)


@pytest.mark.parametrize("l", range(7))
def test_geometric_decay(l):
    ratio = Fraction(amplitude_closed_form(l, 0, -l, 0)) / Fraction(amplitude_closed_form(l + 1, 0, -l - 1, 0))
    assert float(ratio) == pytest.approx(1.5, rel=1e-15)


@settings(max_examples=60, deadline=None)
@given(st.integers(-8, 8), st.integers(0, 8), st.integers(0, 8), st.integers(-6, 6))
def test_log_path_within_cancellation_bound(l1, p1, p2, l0):
    exact = amplitude_closed_form(l1, p1, l0 - l1, p2, l0)
    logged = amplitude_closed_form(l1, p1, l0 - l1, p2, l0, method="log")
    _, biggest = hand_sum(l1, p1, l0 - l1, p2, l0)
    assert abs(exact - logged) <= 1e-12 * biggest


@pytest.mark.parametrize("l1, p1, p2, l0", [(20, 12, 12, 0), (-15, 20, 9, 0), (7, 25, 25, 3)])
def test_large_indices_exact(l1, p1, p2, l0):
    value = amplitude_closed_form(l1, p1, l0 - l1, p2, l0)
    ref, _ = hand_sum(l1, p1, l0 - l1, p2, l0)
    assert value == pytest.approx(ref, rel=1e-14, abs=1e-300)


def test_unknown_method():
    with pytest.raises(DomainError):
        amplitude_closed_form(0, 0, 0, 0, 0, method="float")


def test_pair_weight():
    assert pair_weight(0, 0, 0, 0, 0) == 1.0
    assert pair_weight(1, 0, -1, 0, 0) == pytest.approx(4 / 9, rel=1e-15)
    assert pair_weight(2, 0, -2, 0, 0) == pytest.approx(16 / 81, rel=1e-15)


def test_table_single_entry():
    table = build_state_table(PumpSpec(0), 0, 0)
    assert dict(table.entries) == {(0, 0, 0, 0): 1.0}


def test_table_counts_and_invariants():
    table = build_state_table(PumpSpec(0), 2, 2)
    assert len(table) == 45
    for (l1, p1, l2, p2), c in table.entries.items():
        assert l1 + l2 == 0
        assert table[(-l1, p1, -l2, p2)] == c
        assert table[(l1, p2, l2, p1)] == c


def test_table_geometric_in_l():
    table = build_state_table(PumpSpec(0), 4, 0)
    values = [table.amplitude(l, 0, -l, 0) for l in range(5)]
    for a, b in zip(values, values[1:]):
        assert b / a == pytest.approx(2 / 3, rel=1e-14)


def test_table_nonzero_pump():
    table = build_state_table(PumpSpec(1), 2, 1)
    assert len(table) == 5 * 4
    assert all(l1 + l2 == 1 for l1, _, l2, _ in table.entries)


def test_table_rejects_nonconserving_key():
    with pytest.raises(DomainError):
        AmplitudeTable(PumpSpec(0), 1, 0, {(1, 0, 1, 0): 0.5})


def test_table_is_immutable():
    table = build_state_table(PumpSpec(0), 1, 1)
    with pytest.raises(TypeError):
        table.entries[(0, 0, 0, 0)] = 2.0


def test_table_serialization():
    table = build_state_table(PumpSpec(0), 1, 1)
    lines = table.to_csv().splitlines()
    assert lines[0] == "l1,p1,l2,p2,amplitude,weight"
    assert len(lines) == 1 + 12
    doc = json.loads(table.to_json())
    assert doc["meta"]["l0"] == 0
    assert len(doc["rows"]) == 12
    row = next(r for r in doc["rows"] if (r["l1"], r["p1"], r["p2"]) == (1, 0, 0))
    assert row["amplitude"] == pytest.approx(2 / 3)
    assert row["weight"] == pytest.approx(4 / 9)
