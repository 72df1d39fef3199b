"""Strict JSON scenario configuration.

Grammar: a single JSON object (no comments, no NaN/Infinity, no duplicate
keys).  Every violation is collected before raising.

Top-level keys::

    scenario        required, one of SCENARIOS
    params          builder keyword arguments for the named scene
    lambda          self-similar ratio, 0 < lambda < 1
    orbit           {"s0": [...], "t0": [...], "steps": int, "log_switch_threshold": x}
    fit             {"sigma": x, "n_scales": int, "n_per_scale": int}
    gnp_samples     int >= 16 (default 128)
    ensemble        int >= 64 (limit-set ensemble size, default 64)
    experiments     subset of EXPERIMENTS (default: all)
    output_dir      string
    seed            int (default 0)
    levels          custom scenario only: [{"C": shape, "omega": shape, "anchors": [t, ...]}]
"""
from __future__ import annotations

import inspect
import json
from dataclasses import dataclass, field

from .errors import ConfigError
from .scenes import BUILDERS

SCENARIOS = ("concentric", "eccentric_circles", "tangent_circles", "nested_ellipses",
             "stadium", "rounded_triangle", "custom")
EXPERIMENTS = ("orbit", "fit", "angular", "superexp", "lyapunov", "limit_set", "gnp")
TOP_KEYS = {"scenario", "params", "lambda", "orbit", "fit", "gnp_samples", "ensemble",
            "experiments", "output_dir", "seed", "levels"}
ORBIT_KEYS = {"s0", "t0", "steps", "log_switch_threshold"}
FIT_KEYS = {"sigma", "n_scales", "n_per_scale"}


@dataclass
class OrbitSettings:
    s0: list = field(default_factory=lambda: [0.05])
    t0: list | None = None
    steps: int = 8
    log_switch_threshold: float = 1e-8


@dataclass
class FitSettings:
    sigma: float = 1e-2
    n_scales: int = 5
    n_per_scale: int = 9


@dataclass
class ScenarioConfig:
    scenario: str
    params: dict = field(default_factory=dict)
    lam: float | None = None
    orbit: OrbitSettings = field(default_factory=OrbitSettings)
    fit: FitSettings = field(default_factory=FitSettings)
    gnp_samples: int = 128
    ensemble: int = 64
    experiments: tuple = EXPERIMENTS
    output_dir: str | None = None
    seed: int = 0
    levels: list | None = None


def _no_dupes(pairs):
    out = {}
    for k, v in pairs:
        if k in out:
            raise ConfigError([f"duplicate key {k!r}"])
        out[k] = v
    return out


def _reject_constant(name):
    raise ConfigError([f"non-finite number {name} is not allowed"])


def _is_num(x):
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def _is_int(x):
    return isinstance(x, int) and not isinstance(x, bool)


def parse_config(text: str) -> ScenarioConfig:
    try:
        raw = json.loads(text, object_pairs_hook=_no_dupes, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ConfigError([f"syntax error: {exc.msg}"], exc.lineno, exc.colno) from None
    if not isinstance(raw, dict):
        raise ConfigError(["top level must be an object"])
    return validate_config(raw)


def validate_config(raw: dict) -> ScenarioConfig:
    v = []
    for k in sorted(set(raw) - TOP_KEYS):
        v.append(f"unknown key {k!r}")
    scen = raw.get("scenario")
    if scen is None:
        v.append("missing required key 'scenario'")
    elif scen not in SCENARIOS:
        v.append(f"scenario must be one of {list(SCENARIOS)}, got {scen!r}")

    params = raw.get("params", {})
    if not isinstance(params, dict):
        v.append("params must be an object")
        params = {}
    allowed = set()
    if scen in BUILDERS:
        allowed = set(inspect.signature(BUILDERS[scen]).parameters)
        for k in sorted(set(params) - allowed):
            v.append(f"unknown key 'params.{k}' for scenario {scen!r}")
        for k, val in params.items():
            if k in allowed and k != "co_scale" and k != "omega_center" and not _is_num(val):
                v.append(f"params.{k} must be a number")
            if k in allowed and _is_num(val) and k not in ("omega_center",) and not val > 0:
                v.append(f"params.{k} must be positive")
        if "co_scale" in params and not isinstance(params["co_scale"], bool):
            v.append("params.co_scale must be a boolean")
        if "omega_center" in params:
            oc = params["omega_center"]
            if not (isinstance(oc, list) and len(oc) == 2 and all(_is_num(x) for x in oc)):
                v.append("params.omega_center must be [x, y]")

    lam = raw.get("lambda", params.get("lam"))
    if lam is not None:
        if not _is_num(lam):
            v.append("lambda must be a number")
        elif not 0 < lam < 1:
            v.append(f"lambda must satisfy 0 < lambda < 1, got {lam}")
        elif scen in BUILDERS and "lam" not in allowed:
            v.append(f"scenario {scen!r} takes no lambda")

    orbit = OrbitSettings()
    o = raw.get("orbit", {})
    if not isinstance(o, dict):
        v.append("orbit must be an object")
        o = {}
    for k in sorted(set(o) - ORBIT_KEYS):
        v.append(f"unknown key 'orbit.{k}'")
    for key in ("s0", "t0"):
        if key in o:
            val = o[key]
            if not (isinstance(val, list) and val and all(_is_num(x) for x in val)):
                v.append(f"orbit.{key} must be a non-empty list of numbers")
            else:
                setattr(orbit, key, [float(x) for x in val])
    if "steps" in o:
        if not (_is_int(o["steps"]) and o["steps"] >= 1):
            v.append("orbit.steps must be a positive integer")
        else:
            orbit.steps = o["steps"]
    if "log_switch_threshold" in o:
        x = o["log_switch_threshold"]
        if not (_is_num(x) and 0 < x < 1):
            v.append("orbit.log_switch_threshold must lie in (0, 1)")
        else:
            orbit.log_switch_threshold = float(x)

    fit = FitSettings()
    f = raw.get("fit", {})
    if not isinstance(f, dict):
        v.append("fit must be an object")
        f = {}
    for k in sorted(set(f) - FIT_KEYS):
        v.append(f"unknown key 'fit.{k}'")
    if "sigma" in f:
        if not (_is_num(f["sigma"]) and 0 < f["sigma"] < 1):
            v.append("fit.sigma must lie in (0, 1)")
        else:
            fit.sigma = float(f["sigma"])
    if "n_scales" in f:
        if not (_is_int(f["n_scales"]) and f["n_scales"] >= 2):
            v.append("fit.n_scales must be an integer >= 2")
        else:
            fit.n_scales = f["n_scales"]
    if "n_per_scale" in f:
        if not (_is_int(f["n_per_scale"]) and f["n_per_scale"] >= 3):
            v.append("fit.n_per_scale must be an integer >= 3")
        else:
            fit.n_per_scale = f["n_per_scale"]

    gnp = raw.get("gnp_samples", 128)
    if not (_is_int(gnp) and gnp >= 16):
        v.append("gnp_samples must be an integer >= 16")
    ens = raw.get("ensemble", 64)
    if not (_is_int(ens) and ens >= 64):
        v.append("ensemble must be an integer >= 64")

    exps = raw.get("experiments", list(EXPERIMENTS))
    if not isinstance(exps, list) or not all(isinstance(e, str) for e in exps):
        v.append("experiments must be a list of strings")
        exps = []
    for e in exps:
        if e not in EXPERIMENTS:
            v.append(f"unknown experiment {e!r}")
    if len(set(exps)) != len(exps):
        v.append("experiments must not repeat")

    out = raw.get("output_dir")
    if out is not None and not isinstance(out, str):
        v.append("output_dir must be a string")
    seed = raw.get("seed", 0)
    if not _is_int(seed) or seed < 0:
        v.append("seed must be a non-negative integer")

    levels = raw.get("levels")
    if scen == "custom":
        if not (isinstance(levels, list) and len(levels) >= 2):
            v.append("custom scenario needs 'levels' with at least two entries")
        else:
            for i, lv in enumerate(levels):
                if not isinstance(lv, dict) or not {"C", "omega"} <= set(lv):
                    v.append(f"levels[{i}] must have 'C' and 'omega'")
                elif set(lv) - {"C", "omega", "anchors"}:
                    v.append(f"levels[{i}]: unknown keys {sorted(set(lv) - {'C', 'omega', 'anchors'})}")
    elif levels is not None:
        v.append("'levels' is only allowed for the custom scenario")

    if v:
        raise ConfigError(v)
    params = dict(params)
    if lam is not None:
        params["lam"] = float(lam)
    if "omega_center" in params:
        params["omega_center"] = tuple(params["omega_center"])
    return ScenarioConfig(scen, params, lam, orbit, fit, gnp, ens, tuple(exps), out, seed, levels)
