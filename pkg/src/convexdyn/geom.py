"""Parametrized strictly convex planar curves.

Every curve is parametrized counterclockwise by an angle-like parameter
``t`` in ``[0, 2*pi)``.  Kinds:

* ``circle``, ``ellipse`` -- classical closed forms;
* ``smoothed_stadium``, ``rounded_triangle`` -- built from a curvature
  profile in arclength whose jumps are replaced by a monotone quintic blend,
  the curve being recovered by integrating the tangent angle;
* ``conformal_series`` -- image of the unit circle under a finite power
  series ``phi(z) = sum c_n z^n``;
* :class:`ScaledCurve` -- a homothetic copy of another curve, used for
  self-similar level generation.
"""
from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Sequence

import numpy as np
from scipy import integrate, optimize

from .errors import (
    AccuracyError,
    ConvexityViolationError,
    InvalidShapeError,
    SmoothingOverlapError,
)

TWO_PI = 2.0 * math.pi
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(32)


def wrap_angle(a: float) -> float:
    """Reduce an angle to (-pi, pi]."""
    r = math.remainder(a, TWO_PI)
    return math.pi if r == -math.pi else r


def _cross(a, b) -> float:
    return a[0] * b[1] - a[1] * b[0]


class Intersection(NamedTuple):
    u: float          # ray parameter
    t: float          # curve parameter of the hit
    grazing: bool     # double root (ray tangent to the curve)


@dataclass(frozen=True)
class GeodesicFrame:
    """Signed-arclength chart anchored at the curve parameter ``t_p``."""

    t_p: float


class BoundaryCurve:
    """Base class; subclasses provide ``point``, ``d1`` and ``d2``."""

    kind = "abstract"
    center: np.ndarray

    # -- primitives -------------------------------------------------------
    def point(self, t: float) -> np.ndarray:
        raise NotImplementedError

    def d1(self, t: float) -> np.ndarray:
        raise NotImplementedError

    def d2(self, t: float) -> np.ndarray:
        raise NotImplementedError

    def points(self, ts) -> np.ndarray:
        return np.array([self.point(float(t)) for t in np.ravel(ts)])

    # -- differential geometry -------------------------------------------
    def speed(self, t: float) -> float:
        v = self.d1(t)
        return math.hypot(v[0], v[1])

    def tangent(self, t: float) -> np.ndarray:
        v = self.d1(t)
        return v / math.hypot(v[0], v[1])

    def normal(self, t: float) -> np.ndarray:
        """Outward unit normal (tangent rotated clockwise)."""
        v = self.d1(t)
        n = math.hypot(v[0], v[1])
        return np.array([v[1] / n, -v[0] / n])

    def normal_angle(self, t: float) -> float:
        n = self.normal(t)
        return math.atan2(n[1], n[0])

    def curvature(self, t: float) -> float:
        v, a = self.d1(t), self.d2(t)
        sp = math.hypot(v[0], v[1])
        return _cross(v, a) / sp**3

    # -- metric -----------------------------------------------------------
    def arclength(self, t0: float, t1: float) -> float:
        if t1 < t0 or t1 > t0 + TWO_PI + 1e-12:
            raise ValueError("arclength requires t0 <= t1 <= t0 + 2*pi")
        if t1 == t0:
            return 0.0
        val, err, *rest = integrate.quad(
            self.speed, t0, t1, epsabs=0.0, epsrel=1e-10, limit=400, full_output=1
        )
        if len(rest) > 1 and err > 1e-9 * max(abs(val), 1e-300):
            raise AccuracyError(f"arclength quadrature did not converge: {rest[1]}")
        return val

    @cached_property
    def perimeter(self) -> float:
        return self.arclength(0.0, TWO_PI)

    @cached_property
    def diameter(self) -> float:
        pts = self.points(np.linspace(0.0, TWO_PI, 257)[:-1])
        diff = pts[:, None, :] - pts[None, :, :]
        return float(np.sqrt((diff**2).sum(-1)).max())

    def signed_arclength(self, t_p: float, t: float) -> float:
        dt = wrap_angle(t - t_p)
        if dt >= 0:
            return self.arclength(t_p, t_p + dt)
        return -self.arclength(t_p + dt, t_p)

    def param_at_geodesic(self, t_p: float, s: float) -> float:
        """Parameter at signed arclength ``s`` from ``t_p`` (Newton on arclength)."""
        if s == 0.0:
            return t_p
        t = t_p + s / self.speed(t_p)
        for _ in range(50):
            err = self.signed_arclength(t_p, t) - s
            step = err / self.speed(t)
            t -= step
            if abs(step) < 1e-15 * max(1.0, abs(t)):
                break
        return t

    # -- inverse queries --------------------------------------------------
    @cached_property
    def _normal_angle_grid(self):
        ts = np.linspace(0.0, TWO_PI, 4097)
        ang = np.unwrap([self.normal_angle(float(t)) for t in ts])
        return ts, ang

    def param_at_normal_angle(self, phi: float) -> float:
        """Parameter where the outward normal has angle ``phi``."""
        ts, ang = self._normal_angle_grid
        target = ang[0] + (phi - ang[0]) % TWO_PI
        i = int(np.searchsorted(ang, target))
        i = min(max(i, 1), len(ts) - 1)
        a, b = ts[i - 1], ts[i]
        ref = 0.5 * (ang[i - 1] + ang[i])

        def g(t):
            return ref + wrap_angle(self.normal_angle(t) - ref) - target

        ga, gb = g(a), g(b)
        if ga == 0.0:
            return float(a % TWO_PI)
        if gb == 0.0 or ga * gb > 0:
            return float(b % TWO_PI)
        return optimize.brentq(g, a, b, xtol=1e-15, rtol=4 * np.finfo(float).eps) % TWO_PI

    def locate(self, p) -> float:
        """Parameter of the boundary point closest to ``p`` (``p`` near the curve)."""
        p = np.asarray(p, dtype=float)
        ts = np.linspace(0.0, TWO_PI, 513)[:-1]
        pts = self.points(ts)
        t = float(ts[np.argmin(((pts - p) ** 2).sum(1))])
        for _ in range(30):
            r, v, a = self.point(t) - p, self.d1(t), self.d2(t)
            g = r @ v
            gp = v @ v + r @ a
            step = g / gp
            t -= step
            if abs(step) < 1e-16:
                break
        return t % TWO_PI

    def line_intersections(self, origin, direction) -> list[Intersection]:
        """All intersections of the line ``origin + u*direction`` with the curve.

        ``direction`` must be a unit vector.  Sorted by ``u``.  Uses strict
        convexity: the signed distance to the line is monotone on the two arcs
        separated by the points whose normal is perpendicular to the line.
        """
        o = np.asarray(origin, dtype=float)
        d = np.asarray(direction, dtype=float)
        perp = np.array([-d[1], d[0]])

        def f(t):
            return float(perp @ (self.point(t) - o))

        t_hi = self.param_at_normal_angle(math.atan2(perp[1], perp[0]))
        t_lo = self.param_at_normal_angle(math.atan2(-perp[1], -perp[0]))
        f_hi, f_lo = f(t_hi), f(t_lo)
        tol = 1e-12 * self.diameter
        if f_hi < -tol or f_lo > tol:
            return []
        if abs(f_hi) <= tol or abs(f_lo) <= tol:
            t = t_hi if abs(f_hi) <= tol else t_lo
            return [Intersection(float(d @ (self.point(t) - o)), t, True)]
        hi = t_hi if t_hi > t_lo else t_hi + TWO_PI
        out = []
        for a, b in ((t_lo, hi), (hi, t_lo + TWO_PI)):
            t = optimize.brentq(f, a, b, xtol=1e-15, rtol=4 * np.finfo(float).eps)
            t = self._polish(f, perp, t)
            out.append(Intersection(float(d @ (self.point(t) - o)), t % TWO_PI, False))
        out.sort(key=lambda r: r.u)
        return out

    def _polish(self, f, perp, t):
        ft = f(t)
        for _ in range(2):
            fp = float(perp @ self.d1(t))
            if fp == 0.0:
                break
            t_new = t - ft / fp
            f_new = f(t_new)
            if abs(f_new) >= abs(ft):
                break
            t, ft = t_new, f_new
        return t

    def contains(self, p, margin: float = 0.0) -> bool:
        """Strict interior test with a safety ``margin`` (length units)."""
        v = np.asarray(p, dtype=float) - self.center
        r = math.hypot(v[0], v[1])
        if r == 0.0:
            return True
        hits = self.line_intersections(self.center, v / r)
        return bool(hits) and r < hits[-1].u - margin

    def check_invariants(self, n: int = 1024) -> dict:
        ts = np.linspace(0.0, TWO_PI, n, endpoint=False)
        kappa = np.array([self.curvature(float(t)) for t in ts])
        nrm = np.array([np.linalg.norm(self.normal(float(t))) for t in ts])
        closure = float(np.linalg.norm(self.point(0.0) - self.point(TWO_PI)))
        return {
            "min_curvature": float(kappa.min()),
            "normal_norm_error": float(np.abs(nrm - 1.0).max()),
            "closure_error": closure / self.diameter,
        }


# ---------------------------------------------------------------------------
# classical curves


class Circle(BoundaryCurve):
    kind = "circle"

    def __init__(self, center=(0.0, 0.0), radius: float = 1.0):
        if not radius > 0:
            raise InvalidShapeError(f"circle radius must be positive, got {radius}")
        self.center = np.array(center, dtype=float)
        self.radius = float(radius)

    def __repr__(self):
        return f"Circle(center={tuple(self.center)}, radius={self.radius})"

    def point(self, t):
        return self.center + self.radius * np.array([math.cos(t), math.sin(t)])

    def points(self, ts):
        ts = np.ravel(ts)
        return self.center + self.radius * np.column_stack([np.cos(ts), np.sin(ts)])

    def d1(self, t):
        return self.radius * np.array([-math.sin(t), math.cos(t)])

    def d2(self, t):
        return -self.radius * np.array([math.cos(t), math.sin(t)])

    def normal(self, t):
        return np.array([math.cos(t), math.sin(t)])

    def curvature(self, t):
        return 1.0 / self.radius

    def arclength(self, t0, t1):
        if t1 < t0 or t1 > t0 + TWO_PI + 1e-12:
            raise ValueError("arclength requires t0 <= t1 <= t0 + 2*pi")
        return self.radius * (t1 - t0)

    @cached_property
    def perimeter(self):
        return TWO_PI * self.radius

    @cached_property
    def diameter(self):
        return 2.0 * self.radius

    def param_at_geodesic(self, t_p, s):
        return t_p + s / self.radius

    def param_at_normal_angle(self, phi):
        return phi % TWO_PI

    def locate(self, p):
        v = np.asarray(p, dtype=float) - self.center
        return math.atan2(v[1], v[0]) % TWO_PI

    def contains(self, p, margin=0.0):
        v = np.asarray(p, dtype=float) - self.center
        return math.hypot(v[0], v[1]) < self.radius - margin

    def line_intersections(self, origin, direction):
        w = np.asarray(origin, dtype=float) - self.center
        d = np.asarray(direction, dtype=float)
        half_b = float(w @ d)
        c = float(w @ w) - self.radius**2
        disc = half_b * half_b - c
        tol = 1e-12 * self.radius**2
        if disc < -tol:
            return []
        if abs(disc) <= tol:
            u = -half_b
            return [Intersection(u, self.locate(self.center + w + u * d), True)]
        sq = math.sqrt(disc)
        # numerically stable pair of roots
        q = -(half_b + math.copysign(sq, half_b)) if half_b != 0 else sq
        roots = sorted([q, c / q] if q != 0 else [-sq, sq])
        return [
            Intersection(u, self.locate(self.center + w + u * d), False) for u in roots
        ]


class Ellipse(BoundaryCurve):
    """Axis-aligned ellipse ``(cx + a cos t, cy + b sin t)``."""

    kind = "ellipse"

    def __init__(self, a: float, b: float, center=(0.0, 0.0)):
        if not (a > 0 and b > 0):
            raise InvalidShapeError(f"ellipse semi-axes must be positive, got {a}, {b}")
        self.a, self.b = float(a), float(b)
        self.center = np.array(center, dtype=float)

    def __repr__(self):
        return f"Ellipse(a={self.a}, b={self.b}, center={tuple(self.center)})"

    def point(self, t):
        return self.center + np.array([self.a * math.cos(t), self.b * math.sin(t)])

    def points(self, ts):
        ts = np.ravel(ts)
        return self.center + np.column_stack([self.a * np.cos(ts), self.b * np.sin(ts)])

    def d1(self, t):
        return np.array([-self.a * math.sin(t), self.b * math.cos(t)])

    def d2(self, t):
        return np.array([-self.a * math.cos(t), -self.b * math.sin(t)])

    def curvature(self, t):
        a, b = self.a, self.b
        return a * b / (a * a * math.sin(t) ** 2 + b * b * math.cos(t) ** 2) ** 1.5

    @cached_property
    def diameter(self):
        return 2.0 * max(self.a, self.b)

    def param_at_normal_angle(self, phi):
        return math.atan2(self.b * math.sin(phi), self.a * math.cos(phi)) % TWO_PI

    def locate(self, p):
        v = np.asarray(p, dtype=float) - self.center
        return math.atan2(v[1] / self.b, v[0] / self.a) % TWO_PI

    def contains(self, p, margin=0.0):
        if margin == 0.0:
            v = np.asarray(p, dtype=float) - self.center
            return (v[0] / self.a) ** 2 + (v[1] / self.b) ** 2 < 1.0
        return super().contains(p, margin)

    def line_intersections(self, origin, direction):
        w = np.asarray(origin, dtype=float) - self.center
        d = np.asarray(direction, dtype=float)
        ws = w / (self.a, self.b)
        ds = d / (self.a, self.b)
        A = float(ds @ ds)
        half_b = float(ws @ ds)
        c = float(ws @ ws) - 1.0
        disc = half_b * half_b - A * c
        tol = 1e-12 * A
        if disc < -tol:
            return []
        if abs(disc) <= tol:
            u = -half_b / A
            return [Intersection(u, self.locate(self.center + w + u * d), True)]
        sq = math.sqrt(disc)
        q = -(half_b + math.copysign(sq, half_b)) if half_b != 0 else sq
        roots = sorted([q / A, c / q] if q != 0 else [-sq / A, sq / A])
        return [
            Intersection(u, self.locate(self.center + w + u * d), False) for u in roots
        ]


# ---------------------------------------------------------------------------
# curves built from a curvature profile


def _smoothstep(x):
    return x * x * x * (10.0 - 15.0 * x + 6.0 * x * x)


def _smoothstep_integral(x):
    return x**4 * (2.5 - 3.0 * x + x * x)


@dataclass
class _Segment:
    s0: float
    s1: float
    k0: float
    k1: float          # equal to k0 on constant-curvature pieces
    theta0: float = 0.0
    pos0: np.ndarray | None = None

    @property
    def blend(self) -> bool:
        return self.k0 != self.k1

    def kappa(self, s):
        if not self.blend:
            return self.k0
        x = (s - self.s0) / (self.s1 - self.s0)
        return self.k0 + (self.k1 - self.k0) * _smoothstep(x)

    def theta(self, s):
        ds = s - self.s0
        if not self.blend:
            return self.theta0 + self.k0 * ds
        eps = self.s1 - self.s0
        return self.theta0 + self.k0 * ds + (self.k1 - self.k0) * eps * _smoothstep_integral(ds / eps)

    def pos(self, s):
        ds = s - self.s0
        if ds == 0.0:
            return self.pos0.copy()
        if not self.blend:
            th0 = self.theta0
            if self.k0 == 0.0:
                return self.pos0 + ds * np.array([math.cos(th0), math.sin(th0)])
            th = th0 + self.k0 * ds
            return self.pos0 + np.array(
                [math.sin(th) - math.sin(th0), math.cos(th0) - math.cos(th)]
            ) / self.k0
        x = self.s0 + 0.5 * ds * (_GL_NODES + 1.0)
        th = self.theta(x)
        w = 0.5 * ds * _GL_WEIGHTS
        return self.pos0 + np.array([w @ np.cos(th), w @ np.sin(th)])


class TurningCurve(BoundaryCurve):
    """Closed curve defined by a curvature profile in arclength.

    ``pieces`` is a list of ``(length, curvature)``; arclength 0 sits at the
    midpoint of the first (circular) piece, whose second half closes the
    profile.  Every curvature jump is replaced by a quintic smoothstep over an
    arclength window ``eps`` centered at the junction.  Because the smoothstep
    is antisymmetric about its midpoint, the total turning and the arclength
    are unchanged, and with an ``n_fold`` symmetric profile the curve closes.

    The parameter is proportional to arclength: ``sigma = P t / (2 pi)``.
    """

    def __init__(self, kind, pieces, eps, start_angle, n_fold, center=(0.0, 0.0)):
        self.kind = kind
        self.eps = float(eps)
        self.n_fold = int(n_fold)
        lengths = [float(p[0]) for p in pieces]
        kappas = [float(p[1]) for p in pieces]
        if not self.eps > 0:
            raise InvalidShapeError("smoothing window must be positive")
        self.P = float(sum(lengths))
        self._segments = self._build_segments(lengths, kappas)
        self._integrate(start_angle)
        self._recenter(np.array(center, dtype=float))

    def _build_segments(self, lengths, kappas):
        eps, half = self.eps, 0.5 * self.eps
        n = len(lengths)
        for i, (ell, k) in enumerate(zip(lengths, kappas)):
            need = half if i in (0, n - 1) else eps
            if ell <= need:
                raise SmoothingOverlapError(
                    f"smoothing window eps={eps} does not fit in piece {i} "
                    f"(length {ell}, curvature {k})"
                )
        segs, s = [], 0.0
        for i, (ell, k) in enumerate(zip(lengths, kappas)):
            a = s + (half if i > 0 else 0.0)
            b = s + ell - (half if i < n - 1 else 0.0)
            segs.append(_Segment(a, b, k, k))
            if i < n - 1:
                segs.append(_Segment(b, b + eps, k, kappas[i + 1]))
            s += ell
        segs[-1].s1 = self.P
        return segs

    def _integrate(self, start_angle):
        th, pos = start_angle + 0.5 * math.pi, np.zeros(2)
        for seg in self._segments:
            seg.theta0, seg.pos0 = th, pos
            th, pos = seg.theta(seg.s1), seg.pos(seg.s1)
        scale = self.P / math.pi
        self._closure = float(np.linalg.norm(pos)) / scale
        # segment boundaries carry ~1e-16 * P absolute error, amplified by the
        # largest curvature when turned into angles
        kmax = max(abs(seg.k0) for seg in self._segments)
        tol = 1e-13 * max(1.0, kmax * self.P)
        if self._closure > tol or abs(th - start_angle - 0.5 * math.pi - TWO_PI) > tol:
            raise AccuracyError(f"profile does not close (gap {self._closure:.3e})")
        self._starts = [seg.s0 for seg in self._segments]

    def _recenter(self, center):
        tips = np.array([self._pos(j * self.P / self.n_fold) for j in range(self.n_fold)])
        shift = center - tips.mean(axis=0)
        for seg in self._segments:
            seg.pos0 = seg.pos0 + shift
        self.center = center
        self.tip_radius = float(np.linalg.norm(self._pos(0.0) - center))

    def _seg(self, s):
        i = bisect_right(self._starts, s) - 1
        return self._segments[min(max(i, 0), len(self._segments) - 1)]

    def _sigma(self, t):
        return (t % TWO_PI) * self.P / TWO_PI

    def _pos(self, s):
        return self._seg(s).pos(s)

    def point(self, t):
        return self._pos(self._sigma(t))

    def d1(self, t):
        s = self._sigma(t)
        th = self._seg(s).theta(s)
        return (self.P / TWO_PI) * np.array([math.cos(th), math.sin(th)])

    def d2(self, t):
        s = self._sigma(t)
        seg = self._seg(s)
        th = seg.theta(s)
        return (self.P / TWO_PI) ** 2 * seg.kappa(s) * np.array([-math.sin(th), math.cos(th)])

    def curvature(self, t):
        s = self._sigma(t)
        return self._seg(s).kappa(s)

    def nominal_curvature(self, t):
        """Piecewise curvature before smoothing."""
        s = self._sigma(t)
        seg = self._seg(s)
        if not seg.blend:
            return seg.k0
        return seg.k0 if s < 0.5 * (seg.s0 + seg.s1) else seg.k1

    def in_junction_window(self, t) -> bool:
        s = self._sigma(t)
        return self._seg(s).blend

    def arclength(self, t0, t1):
        if t1 < t0 or t1 > t0 + TWO_PI + 1e-12:
            raise ValueError("arclength requires t0 <= t1 <= t0 + 2*pi")
        return (t1 - t0) * self.P / TWO_PI

    @cached_property
    def perimeter(self):
        return self.P

    def param_at_geodesic(self, t_p, s):
        return t_p + TWO_PI * s / self.P

    def _tangent_angle(self, s):
        return self._seg(s).theta(s)

    def param_at_normal_angle(self, phi):
        th0 = self._segments[0].theta0
        target = th0 + (phi + 0.5 * math.pi - th0) % TWO_PI
        s = optimize.brentq(
            lambda x: self._tangent_angle(x) - target, 0.0, self.P, xtol=1e-15,
            rtol=4 * np.finfo(float).eps,
        )
        return (TWO_PI * s / self.P) % TWO_PI

    def params_at_fraction(self, fractions) -> list[float]:
        return [TWO_PI * f for f in fractions]


def smoothed_stadium(r: float, L: float, eps: float, center=(0.0, 0.0)) -> TurningCurve:
    """Two semicircles of radius ``r`` joined by flats of length ``L``.

    Parameter 0 is the right tip; the left tip sits at ``t = pi``.
    """
    if not (r > 0 and L > 0):
        raise InvalidShapeError(f"stadium needs r > 0 and L > 0, got r={r}, L={L}")
    k = 1.0 / r
    pieces = [(0.5 * math.pi * r, k), (L, 0.0), (math.pi * r, k), (L, 0.0), (0.5 * math.pi * r, k)]
    c = TurningCurve("smoothed_stadium", pieces, eps, 0.0, 2, center)
    c.r, c.L = float(r), float(L)
    q = math.pi * r + L      # arclength between the two tips
    P = c.P
    c.arc_midpoints = [0.0, TWO_PI * q / P]
    c.flat_midpoints = [TWO_PI * (0.5 * math.pi * r + 0.5 * L) / P,
                        TWO_PI * (q + 0.5 * math.pi * r + 0.5 * L) / P]
    return c


def rounded_triangle(H: float, R: float, eps: float, center=(0.0, 0.0)) -> TurningCurve:
    """Equilateral triangle of height ``H`` with vertices rounded by radius ``R``.

    ``H`` is the height of the triangle spanned by the straight sides
    (extended), so the inradius is ``H/3`` and the nominal distance from the
    center to each arc midpoint is ``2H/3 - R``.  The first arc midpoint
    points along +y; parameter 0 sits there.
    """
    if not (H > 0 and R > 0):
        raise InvalidShapeError(f"rounded triangle needs H > 0 and R > 0, got H={H}, R={R}")
    inset = H / 3.0 - R
    if not inset > 0:
        raise InvalidShapeError(f"rounding radius R={R} too large for height H={H}")
    side = 2.0 * math.sqrt(3.0) * inset
    k = 1.0 / R
    arc = TWO_PI * R / 3.0
    pieces = [(0.5 * arc, k)]
    for j in range(3):
        pieces.append((side, 0.0))
        pieces.append((arc if j < 2 else 0.5 * arc, k))
    c = TurningCurve("rounded_triangle", pieces, eps, 0.5 * math.pi, 3, center)
    c.H, c.R = float(H), float(R)
    c.arc_midpoints = [TWO_PI * j / 3.0 for j in range(3)]
    c.flat_midpoints = [TWO_PI * (j / 3.0 + 1.0 / 6.0) for j in range(3)]
    return c


def _match_tip_radius(build, param0, target, **kw):
    """Adjust the flat length so the smoothed tip radius equals ``target``.

    The smoothing offset does not depend on the flat length, so the map is
    affine and one secant step is exact up to roundoff; a second pass polishes.
    """
    p = param0
    for _ in range(3):
        c = build(p, **kw)
        err = c.tip_radius - target
        if abs(err) < 1e-15 * max(1.0, target):
            break
        c2 = build(p + 1e-3, **kw)
        slope = (c2.tip_radius - c.tip_radius) / 1e-3
        p -= err / slope
    return build(p, **kw)


def stadium_with_tip(r, eps, tip_radius, center=(0.0, 0.0)):
    return _match_tip_radius(
        lambda L, **kw: smoothed_stadium(r, L, eps, **kw),
        2.0 * (tip_radius - r), tip_radius, center=center,
    )


def triangle_with_tip(R, eps, tip_radius, center=(0.0, 0.0)):
    return _match_tip_radius(
        lambda H, **kw: rounded_triangle(H, R, eps, **kw),
        1.5 * (tip_radius + R), tip_radius, center=center,
    )


# ---------------------------------------------------------------------------


class ConformalCurve(BoundaryCurve):
    """Image of the unit circle under ``phi(z) = sum_n c_n z**n``."""

    kind = "conformal_series"

    def __init__(self, coeffs: Sequence[complex]):
        self.coeffs = np.array(coeffs, dtype=complex)
        if len(self.coeffs) < 2 or self.coeffs[1] == 0:
            raise InvalidShapeError("conformal series needs a nonzero linear coefficient")
        self.center = np.array([self.coeffs[0].real, self.coeffs[0].imag])
        self._n = np.arange(len(self.coeffs))

    def __repr__(self):
        return f"ConformalCurve({list(self.coeffs)})"

    def _z(self, t, order):
        e = np.exp(1j * self._n * t)
        return complex(np.sum(self.coeffs * (1j * self._n) ** order * e))

    def point(self, t):
        z = self._z(t, 0)
        return np.array([z.real, z.imag])

    def d1(self, t):
        z = self._z(t, 1)
        return np.array([z.real, z.imag])

    def d2(self, t):
        z = self._z(t, 2)
        return np.array([z.real, z.imag])

    def phi(self, z, order=0):
        """``phi`` or its ``order``-th complex derivative at ``z``."""
        c = self.coeffs
        n = self._n
        fall = np.ones(len(c))
        for j in range(order):
            fall = fall * (n - j)
        mask = n >= order
        return complex(np.sum(c[mask] * fall[mask] * z ** (n[mask] - order)))


class ScaledCurve(BoundaryCurve):
    """Homothetic copy ``origin + factor * (base - origin)`` of ``base``."""

    def __init__(self, base: BoundaryCurve, factor: float, origin):
        if not factor > 0:
            raise InvalidShapeError("scale factor must be positive")
        self.base = base
        self.factor = float(factor)
        self.origin = np.array(origin, dtype=float)
        self.kind = base.kind
        self.center = self._fwd(base.center)

    def __repr__(self):
        return f"ScaledCurve({self.base!r}, factor={self.factor}, origin={tuple(self.origin)})"

    def _fwd(self, p):
        return self.origin + self.factor * (np.asarray(p, dtype=float) - self.origin)

    def _back(self, p):
        return self.origin + (np.asarray(p, dtype=float) - self.origin) / self.factor

    def point(self, t):
        return self._fwd(self.base.point(t))

    def points(self, ts):
        return self._fwd(self.base.points(ts))

    def d1(self, t):
        return self.factor * self.base.d1(t)

    def d2(self, t):
        return self.factor * self.base.d2(t)

    def normal(self, t):
        return self.base.normal(t)

    def curvature(self, t):
        return self.base.curvature(t) / self.factor

    def arclength(self, t0, t1):
        return self.factor * self.base.arclength(t0, t1)

    @cached_property
    def perimeter(self):
        return self.factor * self.base.perimeter

    @cached_property
    def diameter(self):
        return self.factor * self.base.diameter

    def param_at_geodesic(self, t_p, s):
        return self.base.param_at_geodesic(t_p, s / self.factor)

    def param_at_normal_angle(self, phi):
        return self.base.param_at_normal_angle(phi)

    def locate(self, p):
        return self.base.locate(self._back(p))

    def contains(self, p, margin=0.0):
        return self.base.contains(self._back(p), margin / self.factor)

    def line_intersections(self, origin, direction):
        hits = self.base.line_intersections(self._back(origin), direction)
        return [Intersection(h.u * self.factor, h.t, h.grazing) for h in hits]


# ---------------------------------------------------------------------------
# functional surface


def make_curve(spec: dict) -> BoundaryCurve:
    """Build a curve from a shape description such as ``{"kind": "circle", "radius": 1}``."""
    spec = dict(spec)
    kind = spec.pop("kind", None)
    center = tuple(spec.pop("center", (0.0, 0.0)))
    try:
        if kind == "circle":
            return Circle(center, spec.pop("radius"))
        if kind == "ellipse":
            return Ellipse(spec.pop("a"), spec.pop("b"), center)
        if kind == "smoothed_stadium":
            return smoothed_stadium(spec.pop("r"), spec.pop("L"), spec.pop("eps"), center)
        if kind == "rounded_triangle":
            return rounded_triangle(spec.pop("H"), spec.pop("R"), spec.pop("eps"), center)
        if kind == "conformal_series":
            coeffs = [complex(*c) if isinstance(c, (list, tuple)) else complex(c)
                      for c in spec.pop("coeffs")]
            return ConformalCurve(coeffs)
    except KeyError as exc:
        raise InvalidShapeError(f"{kind}: missing parameter {exc.args[0]!r}") from None
    finally:
        if spec and kind in {"circle", "ellipse", "smoothed_stadium", "rounded_triangle",
                             "conformal_series"}:
            raise InvalidShapeError(f"{kind}: unknown parameters {sorted(spec)}")
    raise InvalidShapeError(f"unknown curve kind {kind!r}")


def eval_boundary(curve: BoundaryCurve, t: float) -> np.ndarray:
    return curve.point(t % TWO_PI)


def curvature_at(curve: BoundaryCurve, t: float) -> float:
    k = curve.curvature(t)
    if k < -1e-12:
        raise ConvexityViolationError(f"negative curvature {k} at t={t}")
    return k


def outward_normal(curve: BoundaryCurve, t: float) -> np.ndarray:
    return curve.normal(t)


def arclength(curve: BoundaryCurve, t0: float, t1: float) -> float:
    return curve.arclength(t0, t1)


def geodesic_coordinate(curve: BoundaryCurve, frame: GeodesicFrame, t: float) -> float:
    """Signed arclength from ``frame.t_p`` to ``t`` (counterclockwise positive)."""
    return curve.signed_arclength(frame.t_p, t)
