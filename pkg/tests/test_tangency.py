import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from convexdyn.errors import DegenerateGeometryError, HypothesisViolation
from convexdyn.geom import Circle
from convexdyn.scenes import build_scene, concentric, tangent_circles
from convexdyn.tangency import (
    TangencyPoint,
    alpha_beta,
    alpha_beta_formula,
    alpha_bounds,
    angular_variable,
    dyadic_grid,
    find_tangencies,
    fit_local_quadratic,
    scene_tangencies,
    superexp_certificate,
    tangency_report,
)
from convexdyn.transport import ConvexDomain
from convexdyn.quadmodel import ToyConfig, toy_orbit


def test_find_tangencies_examples():
    assert find_tangencies(Circle(), Circle(radius=0.5)) == []
    tps = find_tangencies(Circle(), Circle((0, 0.5), 0.5), omega=ConvexDomain(Circle(radius=2)))
    assert len(tps) == 1
    tp = tps[0]
    assert np.allclose(tp.p, [0, 1], atol=1e-9)
    assert tp.kappa_k == pytest.approx(1.0) and tp.kappa_next == pytest.approx(2.0)
    assert tp.d == pytest.approx(1.0) and tp.R == pytest.approx(2.0)
    assert tp.normal_gap < 1e-8


def test_find_tangencies_coincident():
    assert find_tangencies(Circle(), Circle()) == []


def test_triangle_tangencies_threefold():
    sc = build_scene("rounded_triangle")
    tps = find_tangencies(sc.level(0).C, sc.level(1).C)
    assert len(tps) == 3
    pts = [np.array(tp.p) for tp in tps]
    c, s = math.cos(2 * math.pi / 3), math.sin(2 * math.pi / 3)
    rot = np.array([[c, -s], [s, c]])
    for p in pts:
        q = rot @ p
        assert min(np.linalg.norm(q - r) for r in pts) < 1e-9
    for tp in tps:
        assert tp.kappa_next > tp.kappa_k


@pytest.mark.parametrize("name", ["tangent_circles", "nested_ellipses", "stadium",
                                  "rounded_triangle"])
def test_declared_tangency_invariants(name):
    sc = build_scene(name)
    nx = sc.level(1).C
    for tp in scene_tangencies(sc, 0):
        assert np.linalg.norm(np.array(tp.p) - nx.point(tp.t_next)) < 1e-9
        assert tp.normal_gap < 1e-8
        assert tp.kappa_next > tp.kappa_k


def test_alpha_beta_examples():
    a, b = alpha_beta(1, 2, 1, 2)
    assert a == 0.125 and b == 0.125
    assert b == 2 * a / (2 * 1**2)
    assert alpha_beta(1.5, 1.5, 1, 2)[0] == 0.0
    with pytest.raises(DegenerateGeometryError):
        alpha_beta(1, 2, 1, 0)
    with pytest.raises(DegenerateGeometryError):
        alpha_beta_formula(TangencyPoint(0, (0, 1), 0, 0, 1, 2))


@settings(max_examples=200)
@given(st.floats(0.1, 10), st.floats(0.1, 10), st.floats(0.01, 5), st.floats(0.01, 5))
def test_beta_consistency(k0, k1, d, R):
    a, b = alpha_beta(k0, k1, d, R)
    direct = (k1 / (4 * k0**2)) * (1 / k0 - 1 / k1) * d * d / R
    assert b == pytest.approx(direct, rel=1e-12, abs=1e-300)
    assert b == pytest.approx(k1 * a / (2 * k0**2), rel=1e-15, abs=1e-300)


def test_canonical_alpha_formula():
    tp = scene_tangencies(tangent_circles(), 0)[0]
    assert alpha_beta_formula(tp) == (0.125, 0.125)
    assert tp.R_paper_relation == pytest.approx(0.0)


def test_alpha_bounds_example():
    pts = [TangencyPoint(0, (0, 1), 0, 0, 1.0, 2.0, 1.0, 2.0)]
    lo, hi = alpha_bounds(pts)
    assert lo == 0.0625 and hi == 0.125
    a = alpha_beta_formula(pts[0])[0]
    assert lo <= a <= hi
    with pytest.raises(HypothesisViolation):
        alpha_bounds([TangencyPoint(0, (0, 1), 0, 0, 2.0, 2.0, 1.0, 2.0)])


def test_triangle_alpha_bounds_collapse():
    tps = scene_tangencies(build_scene("rounded_triangle"), 0)
    alphas = [alpha_beta_formula(tp)[0] for tp in tps]
    assert max(alphas) - min(alphas) < 1e-9
    lo, hi = alpha_bounds(tps)
    assert all(lo - 1e-12 <= a <= hi + 1e-12 for a in alphas)


def test_dyadic_grid_shape():
    scales, grids = dyadic_grid(1e-2, 5, 9)
    assert scales == [1e-2 / 2**j for j in range(5)]
    assert all(len(g) == 9 and g[0] == -g[-1] for g in grids)
    _, plus = dyadic_grid(1e-2, 3, 9, "+")
    assert all((g > 0).all() for g in plus)


def test_fit_identity_on_tangent_circles():
    # concentric domain: the transition preserves arclength from the anchor
    f = fit_local_quadratic(tangent_circles(), 0)
    assert f.g1 == pytest.approx(1.0, abs=1e-9)
    assert abs(f.alpha) < 1e-6
    assert len(f.scales) == 5 and f.n_points == 45


def test_fit_symmetric_sides_agree():
    sc = build_scene("nested_ellipses")
    plus = fit_local_quadratic(sc, 0, side="+")
    minus = fit_local_quadratic(sc, 0, side="-")
    assert plus.g1 == pytest.approx(minus.g1, rel=1e-3)


def test_flat_anchor_is_linear():
    sc = build_scene("stadium")
    C = sc.level(0).C
    f = fit_local_quadratic(sc, 0, anchor_t=C.flat_midpoints[0])
    assert abs(f.g1) >= 1e-2


def test_angular_variable_zero_cases():
    sc = concentric()
    lv = sc.level(0)
    for t in (0.0, 1.0, 3.0):
        assert angular_variable(lv.C, lv.omega, t) == pytest.approx(0.0, abs=1e-15)
    tc = tangent_circles()
    lv = tc.level(0)
    assert angular_variable(lv.C, lv.omega, lv.anchors[0]) == pytest.approx(0.0, abs=1e-15)


def test_angular_variable_range():
    C = Circle()
    om = ConvexDomain(Circle((0.5, 0), 2))
    for t in np.linspace(0, 2 * math.pi, 50):
        th = angular_variable(C, om, t)
        assert 0.0 <= th <= math.pi


def test_superexp_toy_orbit_ratios_climb():
    cfg = ToyConfig((2.0,), 0.4, 0.25)
    orb = toy_orbit(cfg, 6)
    cert = superexp_certificate(orb.u, q=cfg.q, r=cfg.r)
    assert cert.bound_holds
    assert 0 < cert.rho < 1
    # u_{k+1}/(2u_k) = 1 - log(2)/(2u_k) climbs to 1; within 5% once u_k > 7
    assert all(a < b < 1 for a, b in zip(cert.ratios, cert.ratios[1:]))
    assert abs(cert.ratios[-1] - 1) <= 0.05
    late = superexp_certificate(orb.u, q=cfg.q, r=cfg.r, k_min=4)
    assert late.passed


def test_superexp_constant_orbit_fails():
    cert = superexp_certificate([3.0] * 8)
    assert not cert.passed
    assert cert.ratios[0] == 0.5


def test_superexp_short_orbit_inconclusive():
    cert = superexp_certificate([1.0, 2.0])
    assert cert.status == "inconclusive" and not cert.passed


def test_report_fields():
    rep = tangency_report(tangent_circles(), 0).to_dict()
    for key in ("k", "p", "kappa_k", "kappa_k1", "d", "R_measured", "R_paper_relation",
                "alpha_formula", "beta_formula", "alpha_fit", "g1_fit", "residual", "deviation"):
        assert key in rep
    assert rep["alpha_formula"] == 0.125
