"""Quadratic branching toy model ``s_{k+1} = alpha_{i_k} s_k**2``.

Values shrink doubly exponentially, so everything that can underflow is
carried in log space.  Itineraries shorter than the orbit repeat periodically.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .errors import HypothesisViolation


@dataclass(frozen=True)
class ToyConfig:
    alphas: tuple
    r: float
    s0: float
    itinerary: tuple = (1,)

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(float(a) for a in self.alphas))
        object.__setattr__(self, "itinerary", tuple(int(i) for i in self.itinerary))

    @property
    def m(self) -> int:
        return len(self.alphas)

    @property
    def q(self) -> float:
        return self.r * max(self.alphas)

    def branch(self, k: int) -> int:
        return self.itinerary[k % len(self.itinerary)]

    def alpha_at(self, k: int) -> float:
        return self.alphas[self.branch(k) - 1]

    def validate(self):
        if self.m < 1 or any(not a > 0 for a in self.alphas):
            raise HypothesisViolation("need at least one branch with alpha > 0")
        if not self.r > 0:
            raise HypothesisViolation("need r > 0")
        if not self.q < 1:
            raise HypothesisViolation(f"q = r max(alpha) = {self.q} must be < 1")
        if not 0.0 <= self.s0 <= self.r:
            raise HypothesisViolation(f"s0 = {self.s0} must lie in [0, r]")
        if not self.itinerary or any(not 1 <= i <= self.m for i in self.itinerary):
            raise HypothesisViolation("itinerary entries must be branch indices 1..m")
        return self


@dataclass
class ToyOrbit:
    s: list
    log_s: list            # iterated in log space; -inf when s0 == 0
    log_closed_form: list
    log_bound: list
    branches: list = field(default_factory=list)

    @property
    def u(self):
        return [-x if math.isfinite(x) else None for x in self.log_s]

    def max_log_rel_error(self) -> float:
        err = 0.0
        for a, b in zip(self.log_s, self.log_closed_form):
            if math.isfinite(b):
                err = max(err, abs(a - b) / max(abs(b), 1.0))
        return err

    def bound_violations(self) -> list[int]:
        return [k for k, (a, b) in enumerate(zip(self.log_s, self.log_bound)) if a > b + 1e-12 * max(1.0, abs(b))]


def closed_form_log(cfg: ToyConfig, n: int) -> float:
    """``log s_n = sum_j 2**(n-1-j) log alpha_{i_j} + 2**n log s0``."""
    if cfg.s0 == 0.0:
        return -math.inf
    acc = math.fsum(2.0 ** (n - 1 - j) * math.log(cfg.alpha_at(j)) for j in range(n))
    return acc + 2.0**n * math.log(cfg.s0)


def toy_bound_log(cfg: ToyConfig, n: int) -> float:
    return math.log(cfg.r) + (2.0**n - 1.0) * math.log(cfg.q)


def toy_bound(cfg: ToyConfig, n: int) -> float:
    """``r q**(2**n - 1)``; underflows to 0 for large ``n`` (use :func:`toy_bound_log`)."""
    cfg.validate()
    return math.exp(toy_bound_log(cfg, n))


def toy_orbit(cfg: ToyConfig, n: int) -> ToyOrbit:
    cfg.validate()
    s = [cfg.s0]
    log_s = [math.log(cfg.s0) if cfg.s0 > 0 else -math.inf]
    for k in range(n):
        a = cfg.alpha_at(k)
        s.append(a * s[-1] * s[-1])
        log_s.append(math.log(a) + 2.0 * log_s[-1])
    return ToyOrbit(
        s, log_s,
        [closed_form_log(cfg, k) for k in range(n + 1)],
        [toy_bound_log(cfg, k) for k in range(n + 1)],
        [cfg.branch(k) for k in range(n)],
    )


def toy_log_orbit(cfg: ToyConfig, n: int, u0: float | None = None) -> list[float]:
    """Affine log form ``u_{k+1} = 2 u_k - log alpha_{i_k}`` with ``u = -log s``."""
    if u0 is None:
        if not cfg.s0 > 0:
            raise ValueError("log orbit needs s0 > 0")
        u0 = -math.log(cfg.s0)
    u = [float(u0)]
    for k in range(n):
        u.append(2.0 * u[-1] - math.log(cfg.alpha_at(k)))
    return u


def inverse_branch(u: float, alpha: float) -> float:
    """``F_i(u) = (u + log alpha_i) / 2``, the inverse of one log step."""
    return 0.5 * (u + math.log(alpha))


def verify_table(cfg: ToyConfig, n: int) -> list[dict]:
    """Rows ``(k, i_k, s_k, u_k, bound_k, closed_form_k)``."""
    orb = toy_orbit(cfg, n)
    rows = []
    for k in range(n + 1):
        rows.append({
            "k": k,
            "i_k": cfg.branch(k),
            "s_k": orb.s[k],
            "u_k": -orb.log_s[k] if math.isfinite(orb.log_s[k]) else None,
            "bound_k": math.exp(orb.log_bound[k]),
            "closed_form_k": math.exp(orb.log_closed_form[k]),
        })
    return rows
