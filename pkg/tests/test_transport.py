import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from convexdyn.errors import DomainError, NoIntersectionError
from convexdyn.geom import Circle, Ellipse, rounded_triangle, smoothed_stadium
from convexdyn.transport import (
    ConvexDomain,
    PuncturedDomain,
    check_gnp,
    radial_map,
    ray_exit,
    reciprocal_hit,
    reciprocal_map,
    thickness,
)

R399 = math.sqrt(3.99)


def disk(r, c=(0.0, 0.0)):
    return ConvexDomain(Circle(c, r))


def circle_exit(center, radius, origin, d):
    # positive root of |o + u d - c|^2 = r^2
    w = np.asarray(origin, float) - np.asarray(center, float)
    b = w @ d
    return -b + math.sqrt(b * b - (w @ w - radius * radius))


def test_ray_exit_examples():
    t, hit = ray_exit(disk(2), (0, 0), (1, 0))
    assert t == pytest.approx(2.0, abs=1e-15) and np.allclose(hit, [2, 0])
    t, hit = ray_exit(disk(2, (0.1, 0)), (0, 1), (0, 1))
    assert abs(t - (R399 - 1)) < 1e-12
    assert np.allclose(hit, [0, R399], atol=1e-12)
    t, _ = ray_exit(disk(2, (0.1, 0)), (-1, 0), (-1, 0))
    assert abs(t - 0.9) < 1e-12


def test_ray_exit_errors():
    with pytest.raises(DomainError):
        ray_exit(disk(1), (3, 0), (1, 0))
    with pytest.raises(ValueError):
        ray_exit(disk(1), (0, 0), (2, 0))


def test_thickness_examples():
    C = Circle()
    for t in (0.0, 1.0, 4.0):
        assert thickness(C, disk(2), t).d == pytest.approx(1.0, abs=1e-14)
    om = disk(3, (1, 0))
    assert thickness(C, om, 0.0).d == pytest.approx(3.0, abs=1e-12)
    assert thickness(C, om, math.pi).d == pytest.approx(1.0, abs=1e-12)
    assert thickness(C, om, math.pi / 2).d == pytest.approx(math.sqrt(8) - 1, abs=1e-12)
    assert thickness(C, disk(2, (0.1, 0)), math.pi / 2).d == pytest.approx(R399 - 1, abs=1e-12)


def test_radial_map_examples():
    C = Circle()
    th = 0.8
    assert np.allclose(radial_map(C, disk(2), th), [2 * math.cos(th), 2 * math.sin(th)])
    assert np.allclose(radial_map(C, disk(2, (0.1, 0)), math.pi / 2), [0, R399], atol=1e-12)
    assert np.allclose(radial_map(C, disk(3, (1, 0)), 0.0), [4, 0])


def test_reciprocal_map_examples():
    C = Circle()
    assert np.allclose(reciprocal_map(disk(2), C, (2, 0)), [1, 0])
    h = reciprocal_hit(disk(2, (0.1, 0)), C, (0, R399))
    assert np.allclose(h.point, [0.05, R399 / 2], atol=1e-12)
    assert abs(h.u - 1.0) < 1e-12
    assert np.allclose(reciprocal_map(disk(3, (1, 0)), C, (4, 0)), [1, 0])


def test_reciprocal_second_root_is_rejected():
    # the inward ray meets the unit circle at u = 1 and u = 2.99
    C = Circle()
    om = disk(2, (0.1, 0))
    x = np.array([0.0, R399])
    inward = -om.curve.normal(om.curve.locate(x))
    us = sorted(h.u for h in C.line_intersections(x, inward))
    assert abs(us[0] - 1.0) < 1e-12 and abs(us[1] - 2.99) < 1e-12
    assert reciprocal_hit(om, C, x).u == pytest.approx(1.0, abs=1e-12)


def test_reciprocal_errors():
    C = Circle((1.5, 0), 0.2)
    with pytest.raises(NoIntersectionError):
        reciprocal_hit(disk(2), C, (0, 2))
    with pytest.raises(DomainError):
        reciprocal_hit(disk(2), C, (0, 1.5))


def test_grazing_flag():
    # inward ray from (0, 2) is the y axis, tangent to the circle at (0.3, 0)
    C = Circle((0.3, 0.0), 0.3)
    h = reciprocal_hit(disk(2), C, (0, 2))
    assert h.grazing
    assert np.allclose(h.point, [0, 0], atol=1e-9)


@pytest.mark.parametrize("r", [1.5, 2.0, 5.0])
def test_parallel_round_trip(r):
    C = Circle((0.2, -0.1), 1.0)
    om = disk(r, (0.2, -0.1))
    for t in np.linspace(0, 2 * math.pi, 33):
        back = reciprocal_map(om, C, radial_map(C, om, t))
        assert np.linalg.norm(back - C.point(t)) < 1e-9


CATALOG = [
    (Circle(), disk(2, (0.1, 0))),
    (Ellipse(2, 1), disk(3)),
    (smoothed_stadium(1, 2, 0.05), disk(3)),
    (rounded_triangle(3, 0.5, 0.02), disk(2.5)),
    (Circle((0.2, 0.0), 0.5), ConvexDomain(Ellipse(2, 1))),
    (Circle(radius=0.5), ConvexDomain(smoothed_stadium(1, 2, 0.05))),
]


@settings(max_examples=512, deadline=None)
@given(st.integers(0, len(CATALOG) - 1), st.floats(0, 2 * math.pi))
def test_monotone_ray(i, t):
    C, om = CATALOG[i]
    s = thickness(C, om, t)
    c, nu = C.point(t), C.normal(t)
    assert s.d >= 0
    assert om.contains(c + 0.999 * s.d * nu)
    assert not om.contains(c + 1.001 * s.d * nu)
    assert np.linalg.norm(s.x - om.curve.point(om.curve.locate(s.x))) < 1e-9


@settings(max_examples=100, deadline=None)
@given(st.integers(0, len(CATALOG) - 1), st.floats(0, 2 * math.pi))
def test_exit_segment_inside(i, t):
    C, om = CATALOG[i]
    s = thickness(C, om, t)
    c, nu = C.point(t), C.normal(t)
    assert om.inside_mask(c + np.linspace(0, s.d, 64, endpoint=False)[1:, None] * nu).all()


def test_circle_exit_matches_quadratic():
    rng = np.random.default_rng(3)
    om = disk(2, (0.1, 0))
    C = Circle()
    for t in rng.uniform(0, 2 * math.pi, 64):
        oracle = circle_exit((0.1, 0), 2, C.point(t), C.normal(t))
        assert abs(thickness(C, om, t).d - oracle) < 1e-12


def test_thickness_lipschitz():
    for C, om in CATALOG:
        ts = np.linspace(0, 2 * math.pi, 400, endpoint=False)
        h = 1e-4
        jumps = [abs(thickness(C, om, t + h).d - thickness(C, om, t).d) / h for t in ts]
        # a Lipschitz bound from geometry: ray tilt over a step of the tangent angle
        L = 10 * om.diameter * max(C.curvature(t) for t in ts) * C.speed(0.0) + 10
        assert max(jumps) < L


def test_gnp_examples():
    C = Circle()
    assert check_gnp(C, disk(2), 256).passed
    assert check_gnp(C, disk(3, (1, 0)), 256).passed
    holed = PuncturedDomain(Circle(radius=2), (1.5, 0.0), 0.3)
    rep = check_gnp(C, holed, 256)
    assert not rep.passed
    kinds = {(v["kind"], v.get("t")) for v in rep.violations}
    assert ("disconnected_ray", 0.0) in kinds


def test_gnp_reports_non_containment_and_needs_samples():
    rep = check_gnp(Circle(radius=3), disk(2), 16)
    assert not rep.passed
    assert rep.violations[0]["kind"] == "not_contained"
    with pytest.raises(ValueError):
        check_gnp(Circle(), disk(2), 8)


def test_punctured_first_exit():
    holed = PuncturedDomain(Circle(radius=2), (1.5, 0.0), 0.3)
    info = holed.exit(np.array([1.0, 0.0]), np.array([1.0, 0.0]))
    assert info.u == pytest.approx(0.2) and info.t_boundary is None
    assert not holed.contains((1.5, 0.1))
