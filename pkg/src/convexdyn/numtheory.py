"""Continued fractions, the Gauss map and Ford circles.

Convergent numerators and denominators are exact integers.  Rational inputs
(:class:`fractions.Fraction`) are expanded exactly; other inputs are
converted to :class:`decimal.Decimal` and expanded with a reliability guard.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction

from .errors import InvalidShapeError

PRECISION = 120
Q_LIMIT = 2**63 - 1


def golden(prec: int = PRECISION) -> Decimal:
    with localcontext() as ctx:
        ctx.prec = prec
        return (Decimal(5).sqrt() - 1) / 2


def sqrt2m1(prec: int = PRECISION) -> Decimal:
    with localcontext() as ctx:
        ctx.prec = prec
        return Decimal(2).sqrt() - 1


def _as_number(x):
    if isinstance(x, (Fraction, Decimal)):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Decimal(repr(x))
    if isinstance(x, str):
        return Decimal(x)
    raise TypeError(f"unsupported number type {type(x).__name__}")


def gauss_map(x):
    """``(T(x), digit)`` with ``T(x) = 1/x - floor(1/x)``; None when ``x == 0``."""
    x = _as_number(x)
    if x == 0:
        return None
    if not 0 < x < 1:
        raise ValueError("x must lie in (0, 1)")
    with localcontext() as ctx:
        ctx.prec = PRECISION
        y = 1 / x
        a = int(math.floor(y))
        return y - a, a


@dataclass(frozen=True)
class ConvergentRow:
    k: int
    a: int
    p: int
    q: int
    error: float
    reliable: bool = True

    @property
    def kappa(self) -> int:
        return 2 * self.q * self.q


@dataclass
class Expansion:
    rows: list
    terminated: bool
    truncated: str | None = None


def expand(x, n: int, guard: float = 1e-12) -> Expansion:
    """First ``n`` convergents ``p_k/q_k`` (k = 1..n) of ``x`` in (0, 1).

    For non-rational inputs the expansion stops, flagged unreliable, once
    ``1/x`` comes within ``guard`` of an integer.
    """
    if n > 40:
        raise ValueError("n must be at most 40")
    x0 = _as_number(x)
    if not 0 < x0 < 1:
        raise ValueError("x must lie in (0, 1)")
    exact = isinstance(x0, Fraction)
    rows = []
    p_prev, q_prev, p, q = 1, 0, 0, 1
    y = x0
    terminated, trunc = False, None
    with localcontext() as ctx:
        ctx.prec = PRECISION
        for k in range(1, n + 1):
            inv = 1 / y
            a = int(math.floor(inv))
            frac = inv - a
            reliable = True
            if not exact and frac != 0:
                near = min(frac, 1 - frac)
                if near < Decimal(guard):
                    reliable = False
            p_prev, q_prev, p, q = p, q, a * p + p_prev, a * q + q_prev
            if q > Q_LIMIT:
                trunc = "q exceeds 64-bit range"
                break
            err = abs(x0 - (Fraction(p, q) if exact else Decimal(p) / Decimal(q)))
            rows.append(ConvergentRow(k, a, p, q, float(err), reliable))
            if not reliable:
                trunc = "digit extraction unreliable"
                break
            if frac == 0:
                terminated = True
                break
            y = frac
    return Expansion(rows, terminated, trunc)


def convergents(x, n: int) -> list[ConvergentRow]:
    return expand(x, n).rows


@dataclass(frozen=True)
class FordCircle:
    p: int
    q: int

    def __post_init__(self):
        if self.q < 1 or math.gcd(self.p, self.q) != 1:
            raise InvalidShapeError(f"Ford circle needs coprime p, q with q >= 1, got {self.p}/{self.q}")

    @property
    def radius(self) -> Fraction:
        return Fraction(1, 2 * self.q * self.q)

    @property
    def center(self) -> tuple:
        return Fraction(self.p, self.q), self.radius

    @property
    def curvature(self) -> int:
        return 2 * self.q * self.q


def ford_circle(p: int, q: int) -> FordCircle:
    return FordCircle(p, q)


def ford_tangent_exact(c1: FordCircle, c2: FordCircle) -> bool:
    (x1, y1), (x2, y2) = c1.center, c2.center
    return (x1 - x2) ** 2 + (y1 - y2) ** 2 == (c1.radius + c2.radius) ** 2


def ford_tangency_gap(c1: FordCircle, c2: FordCircle) -> float:
    """``|center distance - (r1 + r2)|`` in floating point."""
    (x1, y1), (x2, y2) = c1.center, c2.center
    dist = math.hypot(float(x1 - x2), float(y1 - y2))
    return abs(dist - float(c1.radius + c2.radius))


def curvature_ratio_table(x, n: int) -> list[dict]:
    """Rows ``(k, kappa_{k+1}/kappa_k, (q_{k+1}/q_k)^2, a_{k+1}^2)`` from ``q_0 = 1``."""
    rows = convergents(x, n)
    qs = [1] + [r.q for r in rows]
    out = []
    for k in range(len(rows)):
        a_next = rows[k].a
        out.append({
            "k": k,
            "kappa_ratio": Fraction(2 * qs[k + 1] ** 2, 2 * qs[k] ** 2),
            "q_ratio_sq": Fraction(qs[k + 1], qs[k]) ** 2,
            "a_next_sq": a_next * a_next,
        })
    return out


def ford_table(x, n: int) -> list[dict]:
    """Rows ``k, a_k, p_k, q_k, kappa_k, ratio, err, err_times_q2``."""
    rows = convergents(x, n)
    out, q_prev = [], 1
    for r in rows:
        out.append({
            "k": r.k, "a_k": r.a, "p_k": r.p, "q_k": r.q, "kappa_k": r.kappa,
            "ratio": float(Fraction(r.q * r.q, q_prev * q_prev)),
            "err": r.error, "err_times_q2": r.error * r.q * r.q,
        })
        q_prev = r.q
    return out
