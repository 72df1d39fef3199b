"""Truncated complex power series and curvature from a conformal parametrization."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import InversionError, SingularParametrizationError


@dataclass(frozen=True)
class ComplexJet:
    """Coefficients ``a_0 .. a_N`` of a series truncated at order ``N``."""

    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(complex(c) for c in self.coeffs))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n):
        return self.coeffs[n] if n < len(self.coeffs) else 0j

    @property
    def tangent_to_identity(self) -> bool:
        return self[0] == 0 and self[1] == 1

    @classmethod
    def identity(cls, N):
        return cls((0, 1) + (0,) * (N - 1))

    def truncate(self, N):
        return ComplexJet(tuple(self[n] for n in range(N + 1)))

    def __call__(self, z):
        return sum(c * z**n for n, c in enumerate(self.coeffs))


def _mul(a: np.ndarray, b: np.ndarray, N: int) -> np.ndarray:
    return np.convolve(a, b)[: N + 1]


def compose(f: ComplexJet, g: ComplexJet, N: int) -> ComplexJet:
    """``f o g`` truncated at order ``N``; ``g`` must have no constant term."""
    if g[0] != 0:
        raise ValueError("inner series must vanish at 0")
    gv = np.array([g[n] for n in range(N + 1)], dtype=complex)
    out = np.zeros(N + 1, dtype=complex)
    power = np.zeros(N + 1, dtype=complex)
    power[0] = 1.0
    for n in range(N + 1):
        out += f[n] * power
        power = _mul(power, gv, N)
    return ComplexJet(tuple(out))


def inverse(psi: ComplexJet, N: int) -> ComplexJet:
    """Formal inverse ``h`` with ``psi(h(z)) = z``, solved coefficient by coefficient."""
    if psi[0] != 0:
        raise InversionError("series must vanish at 0 to be inverted about 0")
    if psi[1] == 0:
        raise InversionError("linear coefficient vanishes; no formal inverse")
    h = [0j, 1.0 / psi[1]] + [0j] * (N - 1)
    for n in range(2, N + 1):
        c = compose(psi, ComplexJet(h), n)[n]
        h[n] = -c / psi[1]
    return ComplexJet(tuple(h))


def jet_compose_inverse(phi: ComplexJet, psi: ComplexJet, N: int = 2) -> ComplexJet:
    """Jet of ``psi^{-1} o phi``; for maps tangent to the identity the
    quadratic coefficient is ``phi_2 - psi_2``."""
    if N < 2:
        raise ValueError("order must be at least 2")
    if psi[1] == 0:
        raise InversionError("linear coefficient vanishes; no formal inverse")
    if not (phi.tangent_to_identity and psi.tangent_to_identity):
        raise ValueError("both series must be tangent to the identity")
    return compose(inverse(psi, N), phi, N)


# ---------------------------------------------------------------------------


def _derivs(coeffs, z):
    c = np.asarray(coeffs, dtype=complex)
    n = np.arange(len(c))
    d1 = complex(np.sum(c[1:] * n[1:] * z ** (n[1:] - 1)))
    d2 = complex(np.sum(c[2:] * n[2:] * (n[2:] - 1) * z ** (n[2:] - 2))) if len(c) > 2 else 0j
    return d1, d2


def _singular(coeffs, d1) -> bool:
    # |phi'| below roundoff relative to the size of the derivative series
    scale = sum(n * abs(complex(c)) for n, c in enumerate(coeffs))
    return abs(d1) <= 1e-13 * scale


def conformal_curvature(coeffs, theta: float) -> float:
    """Curvature of the image of the unit circle at ``phi(e^{i theta})``.

    ``kappa = Re(1 + z phi''/phi') / |phi'|`` with ``z = e^{i theta}``.
    """
    coeffs = getattr(coeffs, "coeffs", coeffs)
    z = cmath.exp(1j * theta)
    d1, d2 = _derivs(coeffs, z)
    if _singular(coeffs, d1):
        raise SingularParametrizationError(f"phi' vanishes at theta={theta}")
    return (1.0 + z * d2 / d1).real / abs(d1)


def printed_curvature_form(coeffs, theta: float) -> float:
    """``Im(e^{i theta} phi''/phi') / |phi'|``: an alternative closed form kept
    only as a diagnostic; it is 0 for ``phi(z) = R z``."""
    coeffs = getattr(coeffs, "coeffs", coeffs)
    z = cmath.exp(1j * theta)
    d1, d2 = _derivs(coeffs, z)
    if _singular(coeffs, d1):
        raise SingularParametrizationError(f"phi' vanishes at theta={theta}")
    return (z * d2 / d1).imag / abs(d1)


def check_boundary(coeffs, n: int = 512) -> float:
    """Minimum of ``|phi'|`` on ``n`` points of the unit circle."""
    coeffs = getattr(coeffs, "coeffs", coeffs)
    return min(abs(_derivs(coeffs, cmath.exp(2j * math.pi * j / n))[0]) for j in range(n))


@dataclass
class TransitionJetReport:
    applicable: bool
    g1_geodesic: float
    alpha_geodesic: float
    g1_chart: float
    alpha_chart_reparam: float
    alpha_rel_diff: float | None
    regime: str

    def to_dict(self):
        return dict(self.__dict__)


def transition_jet_check(scene, k: int = 0, anchor: int = 0, anchor_t: float | None = None,
                         chart_scale: float = 1.1, sigma: float = 1e-2,
                         g1_tol: float = 1e-6) -> TransitionJetReport:
    """Compare the geodesic-coordinate fit of ``G_k`` with a skewed chart.

    The chart is the tangent-line coordinate at the anchor scaled by
    ``chart_scale`` on both levels; its quadratic coefficient is converted
    back to arclength units before comparison.
    """
    from .tangency import _lsq, dyadic_grid, fit_local_quadratic, transition_samples
    from .dynamics import transition_hit

    lv, nx = scene.level(k), scene.level(k + 1)
    t_a = lv.anchors[anchor] if anchor_t is None else anchor_t
    geo = fit_local_quadratic(scene, k, anchor, sigma=sigma, anchor_t=t_a)

    p = lv.C.point(t_a)
    T = lv.C.tangent(t_a)
    q = nx.C.point(transition_hit(lv.C, lv.omega, nx.C, t_a).t)
    _, grids = dyadic_grid(sigma)
    s = np.concatenate(grids)
    xi, eta = [], []
    for sv in s:
        t = lv.C.param_at_geodesic(t_a, float(sv))
        c = lv.C.point(t)
        c1 = transition_hit(lv.C, lv.omega, nx.C, t).point
        xi.append(chart_scale * float((c - p) @ T))
        eta.append(chart_scale * float((c1 - q) @ T))
    g1c, ac, _ = _lsq(np.array(xi), np.array(eta))
    a_rep = ac * chart_scale
    rel = abs(a_rep - geo.alpha) / abs(geo.alpha) if geo.alpha != 0 else None
    quadratic = abs(geo.g1) <= g1_tol
    regime = "quadratic" if quadratic else ("identity" if abs(geo.g1 - 1) <= g1_tol else "linear")
    return TransitionJetReport(quadratic, geo.g1, geo.alpha, g1c, a_rep, rel, regime)
