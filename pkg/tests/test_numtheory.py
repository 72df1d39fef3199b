import math
from decimal import Decimal
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from convexdyn.errors import InvalidShapeError
from convexdyn.numtheory import (
    convergents,
    curvature_ratio_table,
    expand,
    ford_circle,
    ford_table,
    ford_tangency_gap,
    ford_tangent_exact,
    gauss_map,
    golden,
    sqrt2m1,
)

PHI2 = ((1 + math.sqrt(5)) / 2) ** 2


def test_gauss_map_examples():
    assert gauss_map(Fraction(1, 2)) == (0, 2)
    assert gauss_map(Fraction(2, 7)) == (Fraction(1, 2), 3)
    T, a = gauss_map(golden())
    assert a == 1 and abs(T - golden()) < Decimal("1e-100")
    assert gauss_map(0) is None
    with pytest.raises(ValueError):
        gauss_map(Fraction(3, 2))


def test_golden_fibonacci():
    rows = convergents(golden(), 12)
    assert [r.q for r in rows[:6]] == [1, 2, 3, 5, 8, 13]
    assert all(r.a == 1 for r in rows)


def test_rational_terminates():
    ex = expand(Fraction(2, 7), 10)
    assert ex.terminated
    assert [(r.p, r.q) for r in ex.rows] == [(1, 3), (2, 7)]
    assert [r.a for r in ex.rows] == [3, 2]
    assert ex.rows[-1].error == 0.0


def test_float_rational_flagged():
    ex = expand(2 / 7, 10)
    assert ex.truncated == "digit extraction unreliable"


def test_limits():
    with pytest.raises(ValueError):
        expand(golden(), 41)
    with pytest.raises(ValueError):
        expand(Fraction(3, 2), 3)
    ex = expand(golden(), 40)
    assert all(r.q <= 2**63 - 1 for r in ex.rows)


def test_ford_examples():
    c = ford_circle(1, 2)
    assert c.center == (Fraction(1, 2), Fraction(1, 8)) and c.radius == Fraction(1, 8)
    c0 = ford_circle(0, 1)
    assert c0.center == (0, Fraction(1, 2)) and c0.curvature == 2
    a, b = ford_circle(1, 3), ford_circle(1, 2)
    assert ford_tangent_exact(a, b)
    d2 = (Fraction(1, 6)) ** 2 + (Fraction(1, 8) - Fraction(1, 18)) ** 2
    assert d2 == (a.radius + b.radius) ** 2
    assert abs(float(d2) - 0.0326003) < 1e-7
    assert not ford_tangent_exact(ford_circle(1, 3), ford_circle(2, 3))
    with pytest.raises(InvalidShapeError):
        ford_circle(2, 4)


def test_ratio_table():
    rows = curvature_ratio_table(golden(), 12)
    assert rows[0]["kappa_ratio"] == 1
    for r in rows:
        assert r["kappa_ratio"] == r["q_ratio_sq"]
    assert abs(float(rows[11]["kappa_ratio"]) - PHI2) < 1e-4
    # digits (1, 5, 1, ...): q ratio sits between a and a + 1
    x = Fraction(1, 1) / (1 + Fraction(1, 1) / (5 + Fraction(1, 1) / (1 + Fraction(1, 3))))
    rows = curvature_ratio_table(x, 5)
    r = rows[1]
    assert r["a_next_sq"] == 25 and 25 <= r["kappa_ratio"] <= 36
    assert curvature_ratio_table(Fraction(2, 7), 3)[0]["kappa_ratio"] == 9


@settings(max_examples=200)
@given(st.integers(1, 10**6), st.integers(2, 10**6))
def test_convergent_invariants(p, q):
    if p >= q:
        p, q = q - 1, q
    if p == 0:
        p = 1
    x = Fraction(p, q)
    rows = expand(x, 40).rows
    qs = [1] + [r.q for r in rows]
    for i, r in enumerate(rows):
        assert math.gcd(r.p, r.q) == 1
        assert abs(x - Fraction(r.p, r.q)) * r.q * r.q <= 1
        if i + 1 < len(rows):
            nxt = rows[i + 1]
            assert nxt.q == nxt.a * r.q + qs[i]
            assert abs(r.p * nxt.q - nxt.p * r.q) == 1
            assert abs(x - Fraction(r.p, r.q)) * r.q * nxt.q <= 1
            c1, c2 = ford_circle(r.p, r.q), ford_circle(nxt.p, nxt.q)
            assert ford_tangent_exact(c1, c2)


@pytest.mark.parametrize("x", [golden(), sqrt2m1(), Decimal("0.1234567")])
def test_ford_table_rows(x):
    rows = ford_table(x, 15)
    assert all(r["err_times_q2"] <= 1 for r in rows)
    rs = convergents(x, 15)
    for a, b in zip(rs, rs[1:]):
        assert ford_tangency_gap(ford_circle(a.p, a.q), ford_circle(b.p, b.q)) <= 1e-15


def test_sqrt2_digits():
    rows = convergents(sqrt2m1(), 10)
    assert all(r.a == 2 for r in rows)
