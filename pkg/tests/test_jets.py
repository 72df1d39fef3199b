import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from convexdyn.errors import InversionError, SingularParametrizationError
from convexdyn.geom import ConformalCurve
from convexdyn.jets import (
    ComplexJet,
    check_boundary,
    compose,
    conformal_curvature,
    inverse,
    jet_compose_inverse,
    printed_curvature_form,
    transition_jet_check,
)
from convexdyn.scenes import build_scene, tangent_circles

small = st.floats(-3, 3, allow_nan=False)
cplx = st.builds(complex, small, small)


def jet2(a):
    return ComplexJet((0, 1, a))


def test_examples():
    assert jet_compose_inverse(jet2(2), jet2(2))[2] == 0
    assert jet_compose_inverse(jet2(3), jet2(1))[2] == 2
    assert jet_compose_inverse(jet2(0), jet2(-2))[2] == 2
    out = jet_compose_inverse(jet2(1 + 1j), jet2(0.5), 4)
    assert out[0] == 0 and out[1] == 1


def test_errors():
    with pytest.raises(InversionError):
        inverse(ComplexJet((0, 0, 1)), 3)
    with pytest.raises(InversionError):
        jet_compose_inverse(jet2(1), ComplexJet((0, 0, 1)))
    with pytest.raises(ValueError):
        jet_compose_inverse(ComplexJet((0, 2, 1)), jet2(1))
    with pytest.raises(ValueError):
        jet_compose_inverse(jet2(1), jet2(1), 1)


@settings(max_examples=200)
@given(st.lists(cplx, min_size=1, max_size=6), st.integers(2, 7))
def test_round_trip(tail, N):
    psi = ComplexJet((0, 1) + tuple(tail))
    h = inverse(psi, N)
    # roundoff grows with the size of the inverse coefficients
    scale = max(abs(c) for c in h.coeffs)
    ident = ComplexJet.identity(N)
    for out in (compose(h, psi, N), compose(psi, h, N)):
        assert all(abs(out[n] - ident[n]) <= 1e-14 * scale for n in range(N + 1))


@settings(max_examples=200)
@given(st.lists(st.builds(complex, st.floats(-0.3, 0.3), st.floats(-0.3, 0.3)),
                min_size=1, max_size=4))
def test_round_trip_absolute(tail):
    N = len(tail) + 1
    psi = ComplexJet((0, 1) + tuple(tail))
    out = compose(inverse(psi, N), psi, N)
    ident = ComplexJet.identity(N)
    assert all(abs(out[n] - ident[n]) <= 1e-14 for n in range(N + 1))


@settings(max_examples=1000)
@given(cplx, cplx)
def test_quadratic_coefficient(a, b):
    out = jet_compose_inverse(jet2(a), jet2(b))
    assert abs(out[2] - (a - b)) <= 1e-14 * max(1.0, abs(a), abs(b))


def test_compose_matches_evaluation():
    f = ComplexJet((0, 1, 0.3, -0.1))
    g = ComplexJet((0, 0.5, 0.2))
    fg = compose(f, g, 3)
    z = 1e-3
    assert abs(fg(z) - f(g(z))) < 1e-11


def test_curvature_examples():
    assert conformal_curvature([0, 1], 0.4) == pytest.approx(1.0)
    assert conformal_curvature([0, 2], 1.1) == pytest.approx(0.5)
    assert printed_curvature_form([0, 2], 1.1) == 0.0
    with pytest.raises(SingularParametrizationError):
        conformal_curvature([0, 1, 0.5], math.pi)


@pytest.mark.parametrize("coeffs", [[0, 1, 0.1], [0, 1.5, 0, 0.05], [0.2, 1, 0.1j]])
def test_curvature_matches_parametric(coeffs):
    C = ConformalCurve(coeffs)
    assert check_boundary(coeffs) > 0
    for th in np.linspace(0, 2 * math.pi, 17):
        assert conformal_curvature(coeffs, th) == pytest.approx(C.curvature(th), abs=1e-6)


def test_transition_jet_tangent_circles():
    rep = transition_jet_check(tangent_circles())
    # the concentric domain makes G_k an isometry near the anchor
    assert rep.regime == "identity"
    assert rep.g1_geodesic == pytest.approx(1.0, abs=1e-9)


def test_transition_jet_flat_is_linear():
    sc = build_scene("stadium")
    C = sc.level(0).C
    rep = transition_jet_check(sc, anchor_t=C.flat_midpoints[0])
    assert rep.regime == "linear" and not rep.applicable
