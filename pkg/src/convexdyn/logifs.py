"""Affine IFS in the log coordinate ``u = -log|s|`` and dimension estimates."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ConvexDynError, InvalidShapeError

_MASK = (1 << 64) - 1


class SplitMix64:
    """The SplitMix64 64-bit generator (Steele, Lea and Flood)."""

    def __init__(self, seed: int):
        self.state = int(seed) & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def below(self, m: int) -> int:
        """Integer in ``[0, m)`` by multiply-high."""
        return (self.next_u64() * m) >> 64


@dataclass(frozen=True)
class LogIFS:
    """Maps ``u -> ratio*u + (1 - ratio)*p_i``; with ratio 1/2 this is ``(u + p_i)/2``."""

    offsets: tuple
    ratio: float = 0.5

    def __post_init__(self):
        if len(self.offsets) < 1:
            raise InvalidShapeError("need at least one branch")
        if not 0.0 < self.ratio < 1.0:
            raise InvalidShapeError(f"contraction ratio must lie in (0, 1), got {self.ratio}")

    @property
    def m(self) -> int:
        return len(self.offsets)

    @property
    def halving(self) -> bool:
        return self.ratio == 0.5

    @property
    def hull(self):
        return min(self.offsets), max(self.offsets)

    def apply(self, i: int, u):
        return self.ratio * u + (1.0 - self.ratio) * self.offsets[i]


def branch_maps(alphas: Sequence[float], ratio: float = 0.5) -> LogIFS:
    if any(not a > 0 for a in alphas):
        raise InvalidShapeError("branch coefficients must be positive")
    return LogIFS(tuple(math.log(a) for a in alphas), ratio)


@dataclass
class AttractorSample:
    points: np.ndarray
    seed: int | None
    burn_in: int
    errors: list = field(default_factory=list)


def chaos_game(ifs: LogIFS, n_points: int, seed: int, burn_in: int = 64) -> AttractorSample:
    """Random iteration with uniformly chosen branches."""
    if n_points < 1000:
        raise ValueError("n_points must be at least 1000")
    if burn_in < 32:
        raise ValueError("burn_in must be at least 32")
    rng = SplitMix64(seed)
    r, m = ifs.ratio, ifs.m
    shift = [(1.0 - r) * p for p in ifs.offsets]
    u = float(ifs.offsets[0])
    out = np.empty(n_points)
    for j in range(burn_in + n_points):
        u = r * u + shift[rng.below(m)]
        if j >= burn_in:
            out[j - burn_in] = u
    return AttractorSample(out, seed, burn_in)


def similarity_dimension(m: int) -> float:
    if m < 1:
        raise ValueError("m must be at least 1")
    return math.log2(m)


@dataclass
class DimensionEstimate:
    similarity: float | None
    box: float
    stderr: float
    scales: list
    counts: list
    degenerate: bool = False

    def to_dict(self):
        return {"similarity": self.similarity, "box": self.box, "stderr": self.stderr,
                "scales": self.scales, "counts": self.counts, "degenerate": self.degenerate}


def box_counting_dimension(points, octaves=(4, 8), similarity: float | None = None,
                           min_points: int = 10_000) -> DimensionEstimate:
    """Slope of ``log N(delta)`` against ``log(1/delta)`` on dyadic bins.

    Bins have width ``extent / 2**j`` anchored at the sample minimum, for
    ``j`` in the inclusive octave range.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    if len(pts) < min_points:
        raise ValueError(f"need at least {min_points} points")
    lo = pts.min(axis=0)
    extent = float((pts.max(axis=0) - lo).max())
    js = list(range(octaves[0], octaves[1] + 1))
    if extent == 0.0:
        return DimensionEstimate(similarity, 0.0, 0.0, [], [], True)
    widths, counts = [], []
    for j in js:
        n = 2**j
        delta = extent / n
        idx = np.minimum(np.floor((pts - lo) / delta).astype(np.int64), n - 1)
        key = idx[:, 0] if idx.shape[1] == 1 else idx[:, 0] * (n + 1) + idx[:, 1]
        widths.append(delta)
        counts.append(int(len(np.unique(key))))
    x = np.log(1.0 / np.array(widths))
    y = np.log(np.array(counts, dtype=float))
    A = np.column_stack([x, np.ones_like(x)])
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - A @ coef
    dof = max(len(x) - 2, 1)
    stderr = float(math.sqrt((resid @ resid) / dof / ((x - x.mean()) @ (x - x.mean()))))
    return DimensionEstimate(similarity, float(coef[0]), stderr, widths, counts)


def limit_set_sample(scene, t0s, n_steps: int, log_switch_threshold: float = 1e-8) -> AttractorSample:
    """Final orbit positions of an ensemble of starts.

    Orbits that end in log mode contribute the anchor they collapsed onto.
    """
    from .dynamics import iterate_orbit

    t0s = list(t0s)
    if len(t0s) < 64:
        raise ValueError("ensemble must have at least 64 members")
    pts, errors = [], []
    for j, t0 in enumerate(t0s):
        try:
            orb = iterate_orbit(scene, t0, n_steps, log_switch_threshold)
        except ConvexDynError as exc:
            errors.append({"member": j, "error": str(exc)})
            continue
        if orb.truncated:
            errors.append({"member": j, "error": orb.truncated})
        last = orb.steps[-1]
        if last.mode == "log":
            lv = scene.level(last.k)
            pts.append(lv.C.point(lv.anchors[last.anchor]))
        else:
            pts.append(np.array(last.point))
    return AttractorSample(np.array(pts), None, 0, errors)
