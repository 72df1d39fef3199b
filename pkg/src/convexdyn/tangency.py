"""Tangency points, quadratic coefficients and their numerical certification."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import optimize

from .dynamics import NestedScene, normal_gap_angle, transition_hit
from .errors import ConvexDynError, DegenerateGeometryError, FitError, HypothesisViolation
from .geom import TWO_PI, BoundaryCurve
from .transport import ConvexDomain, as_domain, thickness


@dataclass
class TangencyPoint:
    k: int
    p: tuple
    t: float                  # parameter on C_k
    t_next: float             # parameter on C_{k+1}
    kappa_k: float
    kappa_next: float
    d: float | None = None
    R: float | None = None    # curvature radius of the domain boundary at the radial image
    normal_gap: float = 0.0

    @property
    def R_paper_relation(self):
        """The parallel-curve relation ``1/kappa - d`` (inner-parallel sign)."""
        if self.d is None:
            return None
        return 1.0 / self.kappa_k - self.d


def _gap_along_normal(C_k: BoundaryCurve, inner: BoundaryCurve, t: float):
    """Distance from ``inner(t)`` to ``C_k`` along the normal of ``inner``."""
    q, nu = inner.point(t), inner.normal(t)
    hits = C_k.line_intersections(q, nu)
    if not hits:
        return math.inf, None
    h = hits[-1]
    return h.u, h.t


def find_tangencies(C_k: BoundaryCurve, C_next: BoundaryCurve, tol: float | None = None,
                    omega=None, k: int = 0, n_samples: int = 2048,
                    normal_tol: float = 1e-8) -> list[TangencyPoint]:
    """Points where ``C_next`` touches ``C_k`` from inside with equal normals.

    Local minima of the normal gap below ``tol`` are refined by solving for
    a sign change of the normal mismatch.  Coincident curves (gap below
    ``tol`` on most of the curve) have no isolated tangencies and give [].
    """
    diam = C_k.diameter
    tol = 1e-7 * diam if tol is None else tol
    ts = np.linspace(0.0, TWO_PI, n_samples, endpoint=False)
    gaps = np.array([_gap_along_normal(C_k, C_next, float(t))[0] for t in ts])
    if np.mean(gaps < tol) > 0.5:
        return []

    def mismatch(t):
        g, tk = _gap_along_normal(C_k, C_next, t)
        a, b = C_next.normal(t), C_k.normal(tk)
        return a[0] * b[1] - a[1] * b[0]

    found = []
    n = len(ts)
    for i in range(n):
        if not (gaps[i] <= gaps[i - 1] and gaps[i] <= gaps[(i + 1) % n]):
            continue
        a, b = ts[i] - TWO_PI / n, ts[i] + TWO_PI / n
        try:
            t = optimize.brentq(mismatch, a, b, xtol=1e-15, rtol=4 * np.finfo(float).eps)
        except ValueError:
            t = optimize.minimize_scalar(
                lambda x: _gap_along_normal(C_k, C_next, x)[0], bounds=(a, b),
                method="bounded", options={"xatol": 1e-13}).x
        g, tk = _gap_along_normal(C_k, C_next, t)
        if g > tol or tk is None:
            continue
        ngap = float(np.linalg.norm(C_next.normal(t) - C_k.normal(tk)))
        if ngap > normal_tol:
            continue
        t = t % TWO_PI
        if any(abs(math.remainder(t - f.t_next, TWO_PI)) < 1e-6 for f in found):
            continue
        p = C_k.point(tk)
        tp = TangencyPoint(k, (float(p[0]), float(p[1])), float(tk), float(t),
                           C_k.curvature(tk), C_next.curvature(t), normal_gap=ngap)
        if omega is not None:
            populate_domain_data(tp, C_k, omega)
        found.append(tp)
    found.sort(key=lambda f: f.t)
    return found


def populate_domain_data(tp: TangencyPoint, C_k: BoundaryCurve, omega) -> TangencyPoint:
    dom = as_domain(omega)
    th = thickness(C_k, dom, tp.t)
    tp.d = th.d
    t_om = th.t_omega if th.t_omega is not None else dom.curve.locate(th.x)
    k_om = dom.curve.curvature(t_om)
    tp.R = 1.0 / k_om if k_om > 0 else math.inf
    return tp


def scene_tangencies(scene: NestedScene, k: int, declared_only: bool = True):
    """Tangency points of level ``k`` built from the declared anchors."""
    lv, nx = scene.level(k), scene.level(k + 1)
    out = []
    for t in lv.anchors:
        p = lv.C.point(t)
        tn = nx.C.locate(p)
        tp = TangencyPoint(k, (float(p[0]), float(p[1])), float(t), float(tn),
                           lv.C.curvature(t), nx.C.curvature(tn),
                           normal_gap=float(np.linalg.norm(lv.C.normal(t) - nx.C.normal(tn))))
        out.append(populate_domain_data(tp, lv.C, lv.omega))
    return out


def alpha_beta(kappa_k: float, kappa_next: float, d: float, R: float):
    if not R > 0:
        raise DegenerateGeometryError(f"curvature radius must be positive, got {R}")
    alpha = 0.5 * (1.0 / kappa_k - 1.0 / kappa_next) * d * d / R
    beta = kappa_next * alpha / (2.0 * kappa_k**2)
    return alpha, beta


def alpha_beta_formula(tp: TangencyPoint):
    """``alpha = (1/k_k - 1/k_{k+1}) d^2 / (2R)`` and ``beta = k_{k+1} alpha / (2 k_k^2)``."""
    if tp.d is None or tp.R is None:
        raise DegenerateGeometryError("tangency point lacks thickness or curvature radius")
    return alpha_beta(tp.kappa_k, tp.kappa_next, tp.d, tp.R)


# ---------------------------------------------------------------------------


@dataclass
class QuadraticFit:
    g1: float
    alpha: float
    residual: float
    scales: list
    alpha_by_scale: list
    g1_by_scale: list
    n_points: int

    @property
    def alpha_stability(self) -> float:
        """Relative change of alpha between the two finest scales."""
        a, b = self.alpha_by_scale[-2], self.alpha_by_scale[-1]
        return abs(a - b) / max(abs(b), 1e-300)


def dyadic_grid(sigma=1e-2, n_scales=5, n_per_scale=9, side=None):
    scales = [sigma / 2**j for j in range(n_scales)]
    pts = []
    for sc in scales:
        g = np.linspace(-sc, sc, n_per_scale)
        if side == "+":
            g = np.linspace(0.0, sc, n_per_scale)[1:]
        elif side == "-":
            g = -np.linspace(0.0, sc, n_per_scale)[1:]
        pts.append(g)
    return scales, pts


def _lsq(s, y):
    A = np.column_stack([s, s * s])
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    return float(coef[0]), float(coef[1]), float(np.max(np.abs(A @ coef - y)))


def transition_samples(scene: NestedScene, k: int, t_anchor: float, s_values,
                       chart=None):
    """Input/output coordinates of ``G_k`` around ``t_anchor``.

    Output is the signed arclength on ``C_{k+1}`` from the image of the
    anchor.  ``chart`` optionally maps the input arclength to another
    coordinate (used to test coordinate invariance).
    """
    lv, nx = scene.level(k), scene.level(k + 1)
    t_ref = transition_hit(lv.C, lv.omega, nx.C, t_anchor).t
    out = []
    for s in s_values:
        t = lv.C.param_at_geodesic(t_anchor, float(s))
        try:
            h = transition_hit(lv.C, lv.omega, nx.C, t)
        except ConvexDynError as exc:
            raise FitError(f"transition failed at s={s}: {exc}") from exc
        out.append(nx.C.signed_arclength(t_ref, h.t))
    return np.array(out)


def fit_local_quadratic(scene: NestedScene, k: int, anchor: int = 0, sigma: float = 1e-2,
                        n_scales: int = 5, n_per_scale: int = 9, anchor_t: float | None = None,
                        side: str | None = None) -> QuadraticFit:
    """Least-squares fit of ``s_{k+1} = g1 s + alpha s^2`` on a dyadic grid."""
    lv = scene.level(k)
    t_anchor = lv.anchors[anchor] if anchor_t is None else anchor_t
    scales, grids = dyadic_grid(sigma, n_scales, n_per_scale, side)
    S, Y, by_a, by_g = [], [], [], []
    for g in grids:
        y = transition_samples(scene, k, t_anchor, g)
        g1, a, _ = _lsq(g, y)
        by_a.append(a)
        by_g.append(g1)
        S.append(g)
        Y.append(y)
    s, y = np.concatenate(S), np.concatenate(Y)
    g1, a, res = _lsq(s, y)
    if not (np.isfinite(g1) and np.isfinite(a)):
        raise FitError("non-finite fit coefficients")
    return QuadraticFit(g1, by_a[-1], res, scales, by_a, by_g, len(s))


def angular_variable(C_k: BoundaryCurve, omega_k, t: float) -> float:
    return normal_gap_angle(C_k, omega_k, t)


def angular_slope(C_k: BoundaryCurve, omega_k, t_anchor: float, h: float = 1e-4) -> float:
    """``d theta / ds`` at the anchor (symmetric, Richardson-extrapolated)."""

    def sym(hh):
        tp = C_k.param_at_geodesic(t_anchor, hh)
        tm = C_k.param_at_geodesic(t_anchor, -hh)
        return (angular_variable(C_k, omega_k, tp) + angular_variable(C_k, omega_k, tm)) / (2 * hh)

    a, b = sym(h), sym(h / 2)
    return 2 * b - a


def fit_angular_quadratic(scene: NestedScene, k: int, anchor: int = 0, sigma: float = 1e-2,
                          n_scales: int = 5, n_per_scale: int = 9):
    """Fit ``theta_{k+1} = c1 theta_k + b theta_k^2`` over the dyadic grid."""
    lv, nx = scene.level(k), scene.level(k + 1)
    t_anchor = lv.anchors[anchor]
    _, grids = dyadic_grid(sigma, n_scales, n_per_scale, "+")
    th0, th1 = [], []
    for g in grids:
        for s in g:
            t = lv.C.param_at_geodesic(t_anchor, float(s))
            h = transition_hit(lv.C, lv.omega, nx.C, t)
            th0.append(angular_variable(lv.C, lv.omega, t))
            th1.append(angular_variable(nx.C, nx.omega, h.t))
    c1, b, res = _lsq(np.array(th0), np.array(th1))
    return c1, b, res


# ---------------------------------------------------------------------------


@dataclass
class SuperExpCertificate:
    ratios: list
    rho: float | None
    C: float | None
    bound_holds: bool | None
    passed: bool
    status: str = "ok"

    def to_dict(self):
        return asdict(self)


def superexp_certificate(u_values, q: float | None = None, r: float | None = None,
                         k_min: int = 3, tol: float = 0.05) -> SuperExpCertificate:
    """Check ``u_{k+1} / (2 u_k) -> 1`` for ``u_k = -log|s_k|``.

    When ``q`` and ``r`` are given, the lower bound
    ``u_k >= (2**k - 1)|log q| - |log r|`` is checked at every step.
    ``rho`` and ``C`` describe ``|s_k| <= C rho**(2**k)`` from the last step.
    """
    u = [float(x) for x in u_values if x is not None]
    if len(u) < 4:
        return SuperExpCertificate([], None, None, None, False, "inconclusive")
    ratios = [u[i + 1] / (2.0 * u[i]) if u[i] != 0 else math.inf for i in range(len(u) - 1)]
    tail = ratios[k_min:] if len(ratios) > k_min else ratios[-1:]
    ok = all(abs(x - 1.0) <= tol for x in tail)
    K = len(u) - 1
    log_inv_rho = (u[K] - u[0]) / (2**K - 1) if K > 0 else None
    rho = math.exp(-log_inv_rho) if log_inv_rho is not None else None
    C = None
    if rho is not None and 0 < rho < 1:
        # smallest C making |s_k| <= C rho**(2**k) at every recorded step
        C = max(math.exp(-uk + 2**k * log_inv_rho) for k, uk in enumerate(u))
    bound = None
    if q is not None and r is not None:
        if not 0 < q < 1:
            raise HypothesisViolation(f"bound needs 0 < q < 1, got {q}")
        bound = all(uk >= (2**k - 1) * abs(math.log(q)) - abs(math.log(r)) - 1e-12
                    for k, uk in enumerate(u))
    passed = ok and (rho is not None and 0 < rho < 1) and bound is not False
    return SuperExpCertificate(ratios, rho, C, bound, passed)


def alpha_bounds(points: list[TangencyPoint]):
    """Uniform bounds on the quadratic coefficients over a set of tangencies."""
    if not points:
        raise HypothesisViolation("no tangencies")
    kap = [p.kappa_k for p in points] + [p.kappa_next for p in points]
    kmin, kmax = min(kap), max(kap)
    delta = min(p.kappa_next - p.kappa_k for p in points)
    if not delta > 0:
        raise HypothesisViolation(f"curvature gap must be positive, got {delta}")
    ds = [p.d for p in points]
    Rs = [p.R for p in points]
    a_min = 0.5 * (delta / kmax**2) * min(ds) ** 2 / max(Rs)
    a_max = 0.5 * (1.0 / kmin - 1.0 / kmax) * max(ds) ** 2 / min(Rs)
    return a_min, a_max


# ---------------------------------------------------------------------------


@dataclass
class TangencyReport:
    k: int
    p: tuple
    kappa_k: float
    kappa_k1: float
    d: float
    R_measured: float
    R_paper_relation: float
    alpha_formula: float
    beta_formula: float
    alpha_fit: float | None = None
    g1_fit: float | None = None
    residual: float | None = None
    deviation: float | None = None
    alpha_by_scale: list = field(default_factory=list)
    deviation_by_scale: list = field(default_factory=list)

    def to_dict(self):
        d = asdict(self)
        d["p"] = list(self.p)
        return d


def tangency_report(scene: NestedScene, k: int, anchor: int = 0, fit: bool = True,
                    **fit_kw) -> TangencyReport:
    tp = scene_tangencies(scene, k)[anchor]
    a, b = alpha_beta_formula(tp)
    rep = TangencyReport(k, tp.p, tp.kappa_k, tp.kappa_next, tp.d, tp.R,
                         tp.R_paper_relation, a, b)
    if fit:
        f = fit_local_quadratic(scene, k, anchor, **fit_kw)
        rep.alpha_fit, rep.g1_fit, rep.residual = f.alpha, f.g1, f.residual
        rep.alpha_by_scale = f.alpha_by_scale
        if a != 0:
            rep.deviation_by_scale = [abs(x - a) / abs(a) for x in f.alpha_by_scale]
            rep.deviation = rep.deviation_by_scale[-1]
    return rep
