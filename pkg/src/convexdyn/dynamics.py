"""Return map, level transitions and orbits over nested scenes."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import ConvexDynError, NoIntersectionError
from .geom import TWO_PI, BoundaryCurve, wrap_angle
from .transport import ConvexDomain, Hit, as_domain, reciprocal_hit, thickness


@dataclass(frozen=True)
class Level:
    """One level of a nested scene.

    ``anchors`` are parameters on ``C`` of the declared tangency points with
    the next level's body.
    """

    k: int
    C: BoundaryCurve
    omega: ConvexDomain
    anchors: tuple = ()
    reference: float | None = None   # origin of s when there is no tangency

    def anchor_points(self):
        return [self.C.point(t) for t in self.anchors]


class NestedScene:
    """Level-indexed sequence of ``(C_k, omega_k)``.

    Either pass an explicit list of levels, or a ``builder(k) -> Level`` for a
    self-similar scene whose levels are generated on demand (and cached).
    """

    def __init__(self, levels: Sequence[Level] | None = None,
                 builder: Callable[[int], Level] | None = None, name: str = "custom",
                 meta: dict | None = None):
        if (levels is None) == (builder is None):
            raise ValueError("give exactly one of levels or builder")
        self.name = name
        self.meta = dict(meta or {})
        self._builder = builder
        self._cache: dict[int, Level] = {}
        if levels is not None:
            for lv in levels:
                self._cache[lv.k] = lv
            self.n_levels = len(levels)
        else:
            self.n_levels = None

    @property
    def self_similar(self) -> bool:
        return self._builder is not None

    def level(self, k: int) -> Level:
        if k < 0 or (self.n_levels is not None and k >= self.n_levels):
            raise IndexError(f"scene {self.name!r} has no level {k}")
        if k not in self._cache:
            lv = self._builder(k)
            self._cache[k] = Level(k, lv.C, as_domain(lv.omega), tuple(lv.anchors),
                                   lv.reference)
        return self._cache[k]

    def has_level(self, k: int) -> bool:
        return k >= 0 and (self.n_levels is None or k < self.n_levels)

    def next_anchor_params(self, k: int) -> list[float]:
        """Declared anchors of level ``k`` located on ``C_{k+1}``."""
        nxt = self.level(k + 1).C
        return [nxt.locate(p) for p in self.level(k).anchor_points()]


# ---------------------------------------------------------------------------


def transition_hit(C_k: BoundaryCurve, omega_k, C_next: BoundaryCurve, t: float) -> Hit:
    th = thickness(C_k, omega_k, t)
    return reciprocal_hit(omega_k, C_next, th.x, t_omega=th.t_omega)


def transition(C_k, omega_k, C_next, t) -> np.ndarray:
    """Outward normal to ``omega_k``, then inward normal to ``C_next``."""
    return transition_hit(C_k, omega_k, C_next, t).point


def return_map(C: BoundaryCurve, omega, t: float) -> float:
    return transition_hit(C, omega, C, t).t


def normal_gap_angle(C: BoundaryCurve, omega, t: float) -> float:
    """Unsigned angle in [0, pi] between the normal of ``C`` at ``t`` and the
    outward normal of the domain at the radial image; 0 when they align."""
    dom = as_domain(omega)
    th = thickness(C, dom, t)
    t_om = th.t_omega if th.t_omega is not None else dom.curve.locate(th.x)
    a, b = C.normal(t), dom.curve.normal(t_om)
    return math.atan2(abs(a[0] * b[1] - a[1] * b[0]), float(a @ b))


def nearest_anchor_coordinate(C: BoundaryCurve, anchors, t: float):
    """Signed arclength from the nearest anchor (by parameter distance)."""
    if not anchors:
        return None, None
    i = min(range(len(anchors)), key=lambda j: abs(wrap_angle(t - anchors[j])))
    return i, C.signed_arclength(anchors[i], t)


# ---------------------------------------------------------------------------


@dataclass
class OrbitStep:
    k: int
    mode: str                       # "geometric" | "log"
    t: float | None = None
    point: tuple | None = None
    s: float | None = None
    theta: float | None = None
    d: float | None = None
    u: float | None = None
    anchor: int | None = None


@dataclass
class Orbit:
    steps: list = field(default_factory=list)
    truncated: str | None = None
    switch_check: dict | None = None

    def column(self, name):
        return [getattr(st, name) for st in self.steps]

    @property
    def geometric(self):
        return [st for st in self.steps if st.mode == "geometric"]

    def to_rows(self):
        keys = ("k", "t_k", "x", "y", "s_k", "theta_k", "d_k", "u_k", "mode")
        rows = []
        for st in self.steps:
            x, y = st.point if st.point is not None else (None, None)
            rows.append(dict(zip(keys, (st.k, st.t, x, y, st.s, st.theta, st.d, st.u, st.mode))))
        return keys, rows


def fmt17(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(v)
    if isinstance(v, str):
        return v
    return f"{float(v):.17g}"


def write_orbit_csv(orbit: Orbit, path) -> None:
    keys, rows = orbit.to_rows()
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(keys)
        for r in rows:
            w.writerow([fmt17(r[k]) for k in keys])


def _geometric_step(scene: NestedScene, k: int, t: float) -> OrbitStep:
    lv = scene.level(k)
    th = thickness(lv.C, lv.omega, t)
    refs = lv.anchors or ((lv.reference,) if lv.reference is not None else ())
    i, s = nearest_anchor_coordinate(lv.C, refs, t)
    theta = normal_gap_angle(lv.C, lv.omega, t)
    u = -math.log(abs(s)) if s else None
    p = lv.C.point(t)
    return OrbitStep(k, "geometric", t, (float(p[0]), float(p[1])), s, theta, th.d, u, i)


def iterate_orbit(scene: NestedScene, t0: float, n_steps: int,
                  log_switch_threshold: float = 1e-8,
                  alpha_provider: Callable[[int, int], float] | None = None) -> Orbit:
    """Follow ``c_{k+1} = G_k(c_k)`` for ``n_steps`` transitions.

    Once ``|s_k|`` drops below ``log_switch_threshold`` the orbit continues in
    log coordinates, ``u_{k+1} = 2 u_k - log(alpha_k)``, with ``alpha_k`` the
    fitted quadratic coefficient at the nearest anchor.
    """
    if scene.n_levels is not None and n_steps > scene.n_levels - 1:
        raise ValueError(f"scene has {scene.n_levels} levels; at most {scene.n_levels - 1} steps")
    if alpha_provider is None:
        alpha_provider = _default_alpha_provider(scene)
    orbit = Orbit()
    t = float(t0) % TWO_PI
    try:
        st = _geometric_step(scene, 0, t)
    except ConvexDynError as exc:
        orbit.truncated = f"step 0: {exc}"
        return orbit
    orbit.steps.append(st)
    for k in range(n_steps):
        if st.mode == "log":
            a = alpha_provider(k, st.anchor)
            st = OrbitStep(k + 1, "log", u=2.0 * st.u - math.log(a), anchor=st.anchor)
            orbit.steps.append(st)
            continue
        if st.s is not None and st.s != 0.0 and abs(st.s) < log_switch_threshold:
            a = alpha_provider(k, st.anchor)
            u_log = 2.0 * st.u - math.log(a)
            try:
                nxt = _geometric_step(scene, k + 1, transition_hit(
                    scene.level(k).C, scene.level(k).omega, scene.level(k + 1).C, t).t)
                if nxt.u is not None:
                    orbit.switch_check = {"k": k + 1, "u_geometric": nxt.u, "u_log": u_log,
                                          "rel_diff": abs(nxt.u - u_log) / abs(u_log)}
            except ConvexDynError:
                pass
            st = OrbitStep(k + 1, "log", u=u_log, anchor=st.anchor)
            orbit.steps.append(st)
            continue
        lv, nx = scene.level(k), scene.level(k + 1)
        try:
            t = transition_hit(lv.C, lv.omega, nx.C, t).t
            st = _geometric_step(scene, k + 1, t)
        except ConvexDynError as exc:
            orbit.truncated = f"step {k + 1}: {type(exc).__name__}: {exc}"
            break
        orbit.steps.append(st)
    return orbit


def _default_alpha_provider(scene):
    cache = {}

    def provider(k, anchor):
        key = (k, anchor)
        if key not in cache:
            from .tangency import fit_local_quadratic
            fit = fit_local_quadratic(scene, k, anchor)
            cache[key] = abs(fit.alpha)
        return cache[key]

    return provider


def orbit_from_s0(scene: NestedScene, s0: float, n_steps: int, anchor: int = 0, **kw) -> Orbit:
    lv = scene.level(0)
    t0 = lv.C.param_at_geodesic(lv.anchors[anchor], s0)
    return iterate_orbit(scene, t0, n_steps, **kw)


def ensemble_starts(scene: NestedScene, n: int, spread: float = 0.1) -> list[float]:
    """``n`` starting parameters with ``|s_0| <= spread``, shared round-robin
    among the declared anchors (or the reference point)."""
    lv = scene.level(0)
    refs = list(lv.anchors) or [lv.reference or 0.0]
    m = len(refs)
    per = math.ceil(n / m)
    out = []
    for j in range(n):
        i, r = j % m, j // m
        s = spread * (2.0 * (r + 0.5) / per - 1.0)
        out.append(lv.C.param_at_geodesic(refs[i], s))
    return out


# ---------------------------------------------------------------------------


@dataclass
class GradientCheck:
    eps: float
    d: float
    grad_d: float
    displacement: float
    residual: float


def gradient_expansion_residual(C: BoundaryCurve, omega_family: Callable[[float], object],
                                t: float, eps_grid=(1e-1, 3e-2, 1e-2, 3e-3, 1e-3),
                                h: float = 1e-5):
    """Residual of ``F(c) - c = -2 d grad d + O(d^2)`` along an ``eps`` family.

    Displacements are signed arclengths on ``C``; ``grad d`` is a central
    difference with arclength step ``h``.  Returns the checks and the log-log
    slope of residual against ``eps`` (None when every residual vanishes).
    """
    checks = []
    for eps in eps_grid:
        om = omega_family(eps)
        d = thickness(C, om, t).d
        tp = C.param_at_geodesic(t, h)
        tm = C.param_at_geodesic(t, -h)
        grad = (thickness(C, om, tp).d - thickness(C, om, tm).d) / (2.0 * h)
        disp = C.signed_arclength(t, return_map(C, om, t))
        checks.append(GradientCheck(eps, d, grad, disp, abs(disp + 2.0 * d * grad)))
    res = np.array([c.residual for c in checks])
    if np.all(res == 0.0) or np.any(res == 0.0):
        return checks, None
    slope = float(np.polyfit(np.log([c.eps for c in checks]), np.log(res), 1)[0])
    return checks, slope


@dataclass
class LyapunovReport:
    applicable: bool
    monotone: bool
    first_violation: int | None
    strict_steps: list
    d_prime: float | None = None
    d_second: float | None = None
    note: str = ""

    def to_dict(self):
        return dict(self.__dict__)


def thickness_derivatives(C, omega, t_anchor, h=1e-3):
    """Central differences of ``d`` in arclength at the anchor."""
    tp = C.param_at_geodesic(t_anchor, h)
    tm = C.param_at_geodesic(t_anchor, -h)
    d0 = thickness(C, omega, t_anchor).d
    dp, dm = thickness(C, omega, tp).d, thickness(C, omega, tm).d
    return (dp - dm) / (2 * h), (dp - 2 * d0 + dm) / h**2


def lyapunov_check(scene: NestedScene, orbit: Orbit, anchor: int = 0,
                   tol: float = 1e-10) -> LyapunovReport:
    """Check ``d_{k+1} <= d_k`` along the geometric part of ``orbit``."""
    lv = scene.level(0)
    geo = orbit.geometric
    if not lv.anchors:
        return LyapunovReport(False, False, None, [], note="no declared tangency")
    d1, d2 = thickness_derivatives(lv.C, lv.omega, lv.anchors[anchor])
    scale = max(abs(d2), 1e-12)
    applicable = abs(d1) <= 1e-6 * max(1.0, scale) and d2 > 1e-8
    monotone, first, strict = True, None, []
    for a, b in zip(geo, geo[1:]):
        if b.d > a.d + tol:
            if monotone:
                first = b.k
            monotone = False
        strict.append(bool(b.d < a.d) if a.s else None)
    note = "" if applicable else "hypothesis d'(p)=0, d''(p)>0 not met"
    if orbit.truncated:
        note = (note + "; " if note else "") + f"orbit truncated: {orbit.truncated}"
    return LyapunovReport(applicable, monotone, first, strict, d1, d2, note)


def check_scene(scene: NestedScene, n_levels: int | None = None, n_samples: int = 512,
                gnp_samples: int = 128) -> dict:
    """Sampled nesting, domain monotonicity and normal-property checks."""
    from .transport import check_gnp

    K = n_levels if n_levels is not None else (scene.n_levels or 4)
    out = {"nesting": [], "omega_monotone": [], "gnp": []}
    ts = np.linspace(0.0, TWO_PI, n_samples, endpoint=False)
    for k in range(K):
        lv = scene.level(k)
        out["gnp"].append(check_gnp(lv.C, lv.omega, gnp_samples).passed)
        if k + 1 >= K:
            break
        nx = scene.level(k + 1)
        anchors = lv.anchor_points()
        ok = True
        for t in ts:
            p = nx.C.point(float(t))
            near = any(np.linalg.norm(p - a) < 1e-6 * lv.C.diameter for a in anchors)
            if not near and not lv.C.contains(p, margin=-1e-12 * lv.C.diameter):
                ok = False
                break
        out["nesting"].append(ok)
        out["omega_monotone"].append(
            all(nx.omega.contains(lv.omega.curve.point(float(t)), margin=-1e-12)
                for t in ts[::8])
        )
    return out
