"""Scenario orchestration and byte-stable report files."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import tangency as tg
from .config import ScenarioConfig
from .dynamics import (
    Level,
    NestedScene,
    ensemble_starts,
    iterate_orbit,
    lyapunov_check,
    write_orbit_csv,
)
from .errors import ConvexDynError
from .geom import make_curve
from .logifs import box_counting_dimension, limit_set_sample, similarity_dimension
from .scenes import build_scene
from .transport import ConvexDomain, check_gnp

SCHEMA = "convexdyn.run/1"
G1_BOUND = 1e-6


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    return obj


def _encode(v, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if v is None:
        return "null"
    if v is True:
        return "true"
    if v is False:
        return "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return f"{v:.17g}" if math.isfinite(v) else "null"
    if isinstance(v, str):
        import json
        return json.dumps(v)
    if isinstance(v, list):
        if not v:
            return "[]"
        return "[\n" + ",\n".join(pad + _encode(x, indent, level + 1) for x in v) + "\n" + end + "]"
    if isinstance(v, dict):
        if not v:
            return "{}"
        items = sorted(v.items())
        import json
        return "{\n" + ",\n".join(
            pad + json.dumps(k) + ": " + _encode(x, indent, level + 1) for k, x in items
        ) + "\n" + end + "}"
    raise TypeError(f"cannot serialize {type(v).__name__}")


def dumps_stable(obj, indent: int = 2) -> str:
    """JSON with sorted keys and floats at 17 significant digits."""
    return _encode(_plain(obj), indent, 0) + "\n"


def write_json(path, obj):
    Path(path).write_text(dumps_stable(obj))


# ---------------------------------------------------------------------------


def scene_from_config(cfg: ScenarioConfig) -> NestedScene:
    if cfg.scenario != "custom":
        return build_scene(cfg.scenario, **cfg.params)
    levels = []
    for k, lv in enumerate(cfg.levels):
        C = make_curve(lv["C"])
        om = ConvexDomain(make_curve(lv["omega"]))
        levels.append(Level(k, C, om, tuple(float(t) for t in lv.get("anchors", ())), 0.0))
    return NestedScene(levels=levels, name="custom")


@dataclass
class RunReport:
    experiments: dict = field(default_factory=dict)
    files: list = field(default_factory=list)
    wall_time: float = 0.0
    schema: str = SCHEMA

    @property
    def exit_code(self) -> int:
        return 1 if any(e["status"] in ("violation", "failed") for e in self.experiments.values()) else 0

    def to_dict(self):
        # wall time is left out so report files are byte-reproducible
        return {"schema": self.schema, "experiments": self.experiments,
                "files": sorted(self.files), "exit_code": self.exit_code}


def _start_params(scene, cfg):
    lv = scene.level(0)
    if cfg.orbit.t0 is not None:
        return list(cfg.orbit.t0)
    ref = lv.anchors[0] if lv.anchors else (lv.reference or 0.0)
    return [lv.C.param_at_geodesic(ref, s) for s in cfg.orbit.s0]


def run_scenario(cfg: ScenarioConfig, out_dir=None) -> RunReport:
    t_start = time.perf_counter()
    out = Path(out_dir or cfg.output_dir or "out")
    out.mkdir(parents=True, exist_ok=True)
    scene = scene_from_config(cfg)
    rep = RunReport()
    ctx = {}

    def emit(name, obj):
        write_json(out / name, obj)
        rep.files.append(name)
        return name

    def record(exp, status, files=(), message=""):
        rep.experiments[exp] = {"status": status, "files": list(files), "message": message}

    steps = cfg.orbit.steps
    if scene.n_levels is not None:
        steps = min(steps, scene.n_levels - 1)

    def orbits():
        if "orbits" not in ctx:
            ctx["orbits"] = [iterate_orbit(scene, t0, steps, cfg.orbit.log_switch_threshold)
                             for t0 in _start_params(scene, cfg)]
        return ctx["orbits"]

    has_tangency = bool(scene.level(0).anchors)
    for exp in cfg.experiments:
        try:
            if exp == "orbit":
                files = []
                for i, orb in enumerate(orbits()):
                    name = "orbit.csv" if i == 0 else f"orbit_{i}.csv"
                    write_orbit_csv(orb, out / name)
                    rep.files.append(name)
                    files.append(name)
                trunc = [o.truncated for o in orbits() if o.truncated]
                record(exp, "ok", files, "; ".join(trunc))
            elif exp == "fit":
                if not has_tangency:
                    record(exp, "skipped", (), "no tangency found")
                    continue
                kw = dict(sigma=cfg.fit.sigma, n_scales=cfg.fit.n_scales,
                          n_per_scale=cfg.fit.n_per_scale)
                reports = [tg.tangency_report(scene, 0, i, **kw).to_dict()
                           for i in range(len(scene.level(0).anchors))]
                fits = {"anchors": [
                    {"anchor": i, "regime": "tangency", "g1": r["g1_fit"],
                     "alpha": r["alpha_fit"], "alpha_by_scale": r["alpha_by_scale"],
                     "residual": r["residual"]} for i, r in enumerate(reports)]}
                C0 = scene.level(0).C
                if hasattr(C0, "flat_midpoints"):
                    f = tg.fit_local_quadratic(scene, 0, anchor_t=C0.flat_midpoints[0], **kw)
                    fits["flat"] = {"regime": "flat", "t": C0.flat_midpoints[0], "g1": f.g1,
                                    "alpha": f.alpha, "residual": f.residual}
                names = [emit("tangency.json", {"level": 0, "tangencies": reports}),
                         emit("fit.json", fits)]
                bad = [r["k"] for r in reports if abs(r["g1_fit"]) > G1_BOUND]
                if bad:
                    record(exp, "violation", names,
                           f"fitted |g1| above {G1_BOUND} at {len(bad)} declared tangencies")
                else:
                    record(exp, "ok", names)
            elif exp == "angular":
                if not has_tangency:
                    record(exp, "skipped", (), "no tangency found")
                    continue
                lv = scene.level(0)
                rows = []
                for i, t in enumerate(lv.anchors):
                    slope = tg.angular_slope(lv.C, lv.omega, t)
                    kap = lv.C.curvature(t)
                    c1, b, res = tg.fit_angular_quadratic(scene, 0, i, cfg.fit.sigma)
                    rows.append({"anchor": i, "dtheta_ds": slope, "two_kappa": 2 * kap,
                                 "rel_err": abs(slope - 2 * kap) / (2 * kap),
                                 "theta_fit_linear": c1, "theta_fit_quadratic": b})
                ok = all(r["rel_err"] <= 5e-3 for r in rows)
                record(exp, "ok" if ok else "violation", [emit("angular.json", rows)])
            elif exp == "superexp":
                if not has_tangency:
                    record(exp, "skipped", (), "no tangency found")
                    continue
                certs = []
                for orb in orbits():
                    c = tg.superexp_certificate(orb.column("u"))
                    certs.append(c.to_dict())
                ok = all(c["passed"] for c in certs)
                record(exp, "ok" if ok else "violation", [emit("superexp.json", certs)])
            elif exp == "lyapunov":
                res = [lyapunov_check(scene, orb).to_dict() for orb in orbits()]
                ok = all(r["monotone"] for r in res if r["applicable"])
                msg = "" if all(r["applicable"] for r in res) else "hypothesis not met (reported)"
                record(exp, "ok" if ok else "violation", [emit("lyapunov.json", res)], msg)
            elif exp == "limit_set":
                t0s = ensemble_starts(scene, cfg.ensemble)
                sample = limit_set_sample(scene, t0s, steps, cfg.orbit.log_switch_threshold)
                anchors = np.array(scene.meta.get("anchor_points", []))
                info = {"points": sample.points, "errors": sample.errors}
                if len(anchors) and len(sample.points):
                    dist = np.linalg.norm(sample.points[:, None, :] - anchors[None], axis=2)
                    info["max_distance_to_nearest_anchor"] = float(dist.min(axis=1).max())
                    near = dist.min(axis=1) <= 1e-6
                    info["anchors_hit"] = sorted(set(dist.argmin(axis=1)[near].tolist()))
                dim = {"similarity": similarity_dimension(max(len(anchors), 1)),
                       "box": None, "note": "ensemble too small for box counting"}
                if len(sample.points) >= 10_000:
                    est = box_counting_dimension(sample.points)
                    dim.update(box=est.box, stderr=est.stderr, note="")
                record(exp, "ok", [emit("limit_set.json", info), emit("dimension.json", dim)])
            elif exp == "gnp":
                K = 2
                res = []
                for k in range(K):
                    lv = scene.level(k)
                    g = check_gnp(lv.C, lv.omega, cfg.gnp_samples)
                    res.append({"level": k, **g.to_dict()})
                ok = all(r["pass"] for r in res)
                record(exp, "ok" if ok else "violation", [emit("gnp.json", res)])
        except ConvexDynError as exc:
            record(exp, "failed", (), f"{type(exc).__name__}: {exc}")
    rep.wall_time = time.perf_counter() - t_start
    emit("report.json", rep.to_dict())
    return rep
