"""Named nested scenes.

Self-similar scenes build level ``k`` on demand from a ratio ``lam``:

* ``concentric`` -- unit circle in a disk of radius 2, every level identical;
* ``eccentric_circles`` -- unit circle in a disk of radius 2 offset by 0.1;
* ``tangent_circles`` -- ``C_k`` is the circle of radius ``lam**k`` tangent
  internally at ``p = (0, 1)``; the domain is co-scaled about ``p`` by
  default, or held fixed;
* ``nested_ellipses`` -- semi-axes ``(a, b0 lam**k)`` touching at ``(+-a, 0)``;
* ``stadium`` -- arc radius ``r0 lam**k`` with the tip distance held fixed,
  so consecutive levels touch at both tips;
* ``rounded_triangle`` -- rounding radius ``R0 lam**k`` with the tip distance
  held fixed, three tangencies per level.
"""
from __future__ import annotations

import math

import numpy as np

from .dynamics import Level, NestedScene
from .errors import InvalidShapeError
from .geom import (
    Circle,
    Ellipse,
    rounded_triangle,
    smoothed_stadium,
    stadium_with_tip,
    triangle_with_tip,
)
from .transport import ConvexDomain


def _check_lam(lam):
    if not 0.0 < lam < 1.0:
        raise InvalidShapeError(f"scale ratio must satisfy 0 < lambda < 1, got {lam}")


def concentric(radius: float = 1.0, omega_radius: float = 2.0) -> NestedScene:
    C = Circle((0.0, 0.0), radius)
    om = ConvexDomain(Circle((0.0, 0.0), omega_radius))
    return NestedScene(builder=lambda k: Level(k, C, om, (), 0.0), name="concentric")


def eccentric_circles(offset: float = 0.1, omega_radius: float = 2.0) -> NestedScene:
    C = Circle((0.0, 0.0), 1.0)
    om = ConvexDomain(Circle((offset, 0.0), omega_radius))
    return NestedScene(builder=lambda k: Level(k, C, om, (), 0.0), name="eccentric_circles")


def tangent_circles(lam: float = 0.5, omega_radius: float = 2.0, omega_center=(0.0, 0.0),
                    co_scale: bool = True) -> NestedScene:
    _check_lam(lam)
    p = np.array([0.0, 1.0])
    oc = np.array(omega_center, dtype=float)

    def build(k):
        f = lam**k
        C = Circle(p + f * (np.array([0.0, 0.0]) - p), f)
        if co_scale:
            om = Circle(p + f * (oc - p), f * omega_radius)
        else:
            om = Circle(oc, omega_radius)
        return Level(k, C, ConvexDomain(om), (0.5 * math.pi,))

    return NestedScene(builder=build, name="tangent_circles",
                       meta={"anchor_points": [p.tolist()], "lam": lam, "co_scale": co_scale})


def nested_ellipses(a: float = 2.0, b0: float = 1.0, lam: float = 0.5,
                    omega_radius: float = 3.0) -> NestedScene:
    _check_lam(lam)
    if not b0 < a:
        raise InvalidShapeError("nested ellipses need b0 < a so the tips are the tangencies")
    om = ConvexDomain(Circle((0.0, 0.0), omega_radius))

    def build(k):
        return Level(k, Ellipse(a, b0 * lam**k), om, (0.0, math.pi))

    return NestedScene(builder=build, name="nested_ellipses",
                       meta={"anchor_points": [[a, 0.0], [-a, 0.0]], "lam": lam})


def stadium(r0: float = 1.0, L0: float = 2.0, lam: float = 0.5, eps0: float = 0.05,
            omega_radius: float = 3.0) -> NestedScene:
    _check_lam(lam)
    first = smoothed_stadium(r0, L0, eps0)
    tip = first.tip_radius
    om = ConvexDomain(Circle((0.0, 0.0), omega_radius))

    def build(k):
        C = first if k == 0 else stadium_with_tip(r0 * lam**k, eps0 * lam**k, tip)
        return Level(k, C, om, tuple(C.arc_midpoints))

    return NestedScene(builder=build, name="stadium",
                       meta={"anchor_points": [[tip, 0.0], [-tip, 0.0]], "lam": lam,
                             "tip_radius": tip})


def rounded_triangle_scene(H0: float = 3.0, R0: float = 0.5, lam: float = 0.5,
                           eps0: float = 0.02, omega_radius: float = 2.5) -> NestedScene:
    _check_lam(lam)
    first = rounded_triangle(H0, R0, eps0)
    tip = first.tip_radius
    om = ConvexDomain(Circle((0.0, 0.0), omega_radius))

    def build(k):
        C = first if k == 0 else triangle_with_tip(R0 * lam**k, eps0 * lam**k, tip)
        return Level(k, C, om, tuple(C.arc_midpoints))

    pts = [[tip * math.cos(math.pi / 2 + j * 2 * math.pi / 3),
            tip * math.sin(math.pi / 2 + j * 2 * math.pi / 3)] for j in range(3)]
    return NestedScene(builder=build, name="rounded_triangle",
                       meta={"anchor_points": pts, "lam": lam, "tip_radius": tip})


BUILDERS = {
    "concentric": concentric,
    "eccentric_circles": eccentric_circles,
    "tangent_circles": tangent_circles,
    "nested_ellipses": nested_ellipses,
    "stadium": stadium,
    "rounded_triangle": rounded_triangle_scene,
}


def build_scene(name: str, **params) -> NestedScene:
    try:
        fn = BUILDERS[name]
    except KeyError:
        raise InvalidShapeError(f"unknown scenario {name!r}") from None
    return fn(**params)
