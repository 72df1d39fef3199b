"""Normal-ray transport between a convex body ``C`` and a surrounding domain.

The outward normal ray from a point of the boundary of ``C`` travels until it
leaves the domain (thickness / radial map); the inward normal ray from a
point of the domain boundary is followed until it first meets a target body
(reciprocal map).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import DomainError, NoIntersectionError, UnboundedRayError
from .geom import TWO_PI, BoundaryCurve, Circle, Ellipse


class ExitInfo(NamedTuple):
    u: float
    point: np.ndarray
    t_boundary: float | None   # parameter on the outer boundary, None for a hole hit


class Hit(NamedTuple):
    point: np.ndarray
    t: float
    u: float
    grazing: bool


@dataclass(frozen=True)
class ThicknessSample:
    t: float
    d: float
    x: np.ndarray = field(repr=False)   # radial image on the domain boundary
    t_omega: float | None = None        # its parameter on the outer boundary


def _polygon(curve: BoundaryCurve, n: int = 2048) -> np.ndarray:
    return curve.points(np.linspace(0.0, TWO_PI, n, endpoint=False))


class ConvexDomain:
    """Open region enclosed by a convex boundary curve."""

    kind = "convex"

    def __init__(self, curve: BoundaryCurve):
        self.curve = curve
        self._poly = None

    def __repr__(self):
        return f"ConvexDomain({self.curve!r})"

    @property
    def diameter(self) -> float:
        return self.curve.diameter

    def contains(self, p, margin: float = 0.0) -> bool:
        return self.curve.contains(p, margin)

    def inside_mask(self, pts) -> np.ndarray:
        """Vectorized membership test used for dense ray subdivision."""
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        c = self.curve
        if isinstance(c, Circle):
            return ((pts - c.center) ** 2).sum(1) < c.radius**2
        if isinstance(c, Ellipse):
            v = pts - c.center
            return (v[:, 0] / c.a) ** 2 + (v[:, 1] / c.b) ** 2 < 1.0
        if self._poly is None:
            self._poly = _polygon(c)
        a = self._poly
        e = np.roll(a, -1, axis=0) - a
        rel = pts[:, None, :] - a[None, :, :]
        cross = e[None, :, 0] * rel[..., 1] - e[None, :, 1] * rel[..., 0]
        return (cross > 0).all(axis=1)

    def exit(self, origin, direction) -> ExitInfo:
        o = np.asarray(origin, dtype=float)
        d = np.asarray(direction, dtype=float)
        hits = self.curve.line_intersections(o, d)
        if len(hits) < 2 or not (hits[0].u < 0.0 < hits[-1].u):
            raise DomainError(f"ray origin {tuple(o)} is not strictly inside the domain")
        h = hits[-1]
        if h.u > 1e6 * self.diameter:
            raise UnboundedRayError("no exit within 1e6 diameters")
        return ExitInfo(h.u, o + h.u * d, h.t)


class PuncturedDomain(ConvexDomain):
    """Convex domain with a closed disk removed; deliberately fails the normal property."""

    kind = "punctured"

    def __init__(self, curve: BoundaryCurve, hole_center, hole_radius: float):
        super().__init__(curve)
        self.hole = Circle(hole_center, hole_radius)

    def __repr__(self):
        return f"PuncturedDomain({self.curve!r}, hole={self.hole!r})"

    def contains(self, p, margin=0.0):
        v = np.asarray(p, dtype=float) - self.hole.center
        outside_hole = math.hypot(v[0], v[1]) > self.hole.radius + margin
        return outside_hole and self.curve.contains(p, margin)

    def inside_mask(self, pts):
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        off_hole = ((pts - self.hole.center) ** 2).sum(1) > self.hole.radius**2
        return off_hole & super().inside_mask(pts)

    def exit(self, origin, direction):
        """First exit: the earlier of entering the hole or leaving the outer boundary."""
        o = np.asarray(origin, dtype=float)
        d = np.asarray(direction, dtype=float)
        if not self.contains(o):
            raise DomainError(f"ray origin {tuple(o)} is not inside the domain")
        outer = super().exit(o, d)
        into_hole = [h.u for h in self.hole.line_intersections(o, d) if h.u > 0.0]
        if into_hole and into_hole[0] < outer.u:
            u = into_hole[0]
            return ExitInfo(u, o + u * d, None)
        return outer


def as_domain(obj) -> ConvexDomain:
    if isinstance(obj, ConvexDomain):
        return obj
    if isinstance(obj, BoundaryCurve):
        return ConvexDomain(obj)
    raise TypeError(f"cannot interpret {type(obj).__name__} as a domain")


def ray_exit(domain, origin, direction):
    """Distance ``t_exit`` along the ray until it leaves ``domain``, and the hit point."""
    d = np.asarray(direction, dtype=float)
    nd = math.hypot(d[0], d[1])
    if abs(nd - 1.0) > 1e-12:
        raise ValueError("direction must be a unit vector")
    info = as_domain(domain).exit(origin, d)
    return info.u, info.point


def thickness(C: BoundaryCurve, omega, t: float) -> ThicknessSample:
    dom = as_domain(omega)
    info = dom.exit(C.point(t), C.normal(t))
    return ThicknessSample(t, info.u, info.point, info.t_boundary)


def radial_map(C: BoundaryCurve, omega, t: float) -> np.ndarray:
    return thickness(C, omega, t).x


def reciprocal_hit(omega, C_target: BoundaryCurve, x, t_omega: float | None = None) -> Hit:
    """First hit of the inward normal ray at ``x`` (on the outer boundary) with ``C_target``."""
    dom = as_domain(omega)
    curve = dom.curve
    x = np.asarray(x, dtype=float)
    if t_omega is None:
        t_omega = curve.locate(x)
        gap = float(np.linalg.norm(curve.point(t_omega) - x))
        if gap > 1e-9 * max(1.0, curve.diameter):
            raise DomainError(f"point ({x[0]:.12g}, {x[1]:.12g}) is not on the domain boundary (gap {gap:.3e})")
    inward = -curve.normal(t_omega)
    tol = 1e-12 * max(1.0, C_target.diameter)
    hits = [h for h in C_target.line_intersections(x, inward) if h.u > -tol]
    if not hits:
        raise NoIntersectionError(
            f"inward normal ray from ({x[0]:.12g}, {x[1]:.12g}) misses the target body"
        )
    h = hits[0]
    return Hit(x + h.u * inward, h.t, h.u, h.grazing)


def reciprocal_map(omega, C_target: BoundaryCurve, x) -> np.ndarray:
    return reciprocal_hit(omega, C_target, x).point


@dataclass
class GNPReport:
    passed: bool
    violations: list
    n_samples: int

    def to_dict(self):
        return {"pass": self.passed, "violations": self.violations, "n_samples": self.n_samples}


def check_gnp(C: BoundaryCurve, omega, n_samples: int = 128, n_sub: int = 1024) -> GNPReport:
    """Sampled check of the geometric normal property of ``(C, omega)``.

    (a) each outward normal ray from ``C`` meets the domain in one interval,
    tested by dense subdivision out to the first exit plus one diameter;
    (b) each inward normal ray from the outer boundary meets ``C``.
    Holes of a punctured domain are not sampled in (b).
    """
    if n_samples < 16:
        raise ValueError("n_samples must be at least 16")
    dom = as_domain(omega)
    viol = []
    ts = np.linspace(0.0, TWO_PI, n_samples, endpoint=False)
    for t in ts:
        t = float(t)
        c, nu = C.point(t), C.normal(t)
        try:
            info = dom.exit(c, nu)
        except DomainError:
            viol.append({"kind": "not_contained", "t": t})
            continue
        us = np.linspace(0.0, info.u + dom.diameter, n_sub)
        inside = dom.inside_mask(c + us[:, None] * nu)
        # connected iff the inside samples form a prefix
        first_out = np.argmin(inside) if not inside.all() else len(inside)
        if inside[first_out:].any():
            u_back = float(us[first_out + int(np.argmax(inside[first_out:]))])
            viol.append({"kind": "disconnected_ray", "t": t, "u_reentry": u_back})
    for t in ts:
        t = float(t)
        x = dom.curve.point(t)
        try:
            reciprocal_hit(dom, C, x, t_omega=t)
        except NoIntersectionError:
            viol.append({"kind": "inward_miss", "t_omega": t})
    return GNPReport(not viol, viol, n_samples)
