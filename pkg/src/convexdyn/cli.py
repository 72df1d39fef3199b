"""Command line entry point.

Exit codes: 0 success, 1 a checked invariant failed, 2 usage or config error.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

from .config import parse_config
from .errors import ConfigError, ConvexDynError, InvalidShapeError

EXIT_OK, EXIT_VIOLATION, EXIT_CONFIG = 0, 1, 2


def _floats(text):
    return [float(x) for x in text.split(",") if x.strip()]


def _ints(text):
    return [int(x) for x in text.split(",") if x.strip()]


def cmd_scenario_run(args):
    from .runner import run_scenario

    try:
        cfg = parse_config(Path(args.config).read_text())
    except ConfigError as exc:
        for v in exc.violations:
            print(f"config error: {v}", file=sys.stderr)
        if exc.line is not None:
            print(f"  at line {exc.line}, column {exc.column}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        rep = run_scenario(cfg, args.out)
    except InvalidShapeError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    for name, e in rep.experiments.items():
        line = f"{name:10s} {e['status']}"
        if e["message"]:
            line += f"  ({e['message']})"
        print(line)
    print(f"wall time {rep.wall_time:.2f}s", file=sys.stderr)
    return rep.exit_code


def cmd_tangency_fit(args):
    from .runner import dumps_stable
    from .scenes import build_scene
    from .tangency import tangency_report

    params = {"lam": args.lam} if args.lam is not None else {}
    try:
        scene = build_scene(args.scenario, **params)
    except (InvalidShapeError, TypeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if not scene.level(args.level).anchors:
        print(dumps_stable({"status": "no tangency found"}), end="")
        return EXIT_OK
    reps = [tangency_report(scene, args.level, i, sigma=args.sigma).to_dict()
            for i in range(len(scene.level(args.level).anchors))]
    print(dumps_stable(reps), end="")
    return EXIT_VIOLATION if any(abs(r["g1_fit"]) > args.g1_bound for r in reps) else EXIT_OK


def cmd_ifs_sample(args):
    from .logifs import (branch_maps, box_counting_dimension, chaos_game,
                         similarity_dimension)
    from .runner import write_json

    if args.alphas:
        alphas = _floats(args.alphas)
        if args.m is not None and args.m != len(alphas):
            print("config error: --m disagrees with the number of --alphas", file=sys.stderr)
            return EXIT_CONFIG
    else:
        m = args.m or 2
        alphas = [math.exp(i / (m - 1)) if m > 1 else 1.0 for i in range(m)]
    try:
        ifs = branch_maps(alphas, args.ratio)
        sample = chaos_game(ifs, args.n, args.seed, args.burn_in)
    except (InvalidShapeError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "points.csv", "w") as fh:
        for u in sample.points:
            fh.write(f"{u:.17g}\n")
    sim = similarity_dimension(ifs.m)
    est = box_counting_dimension(sample.points, similarity=sim, min_points=min(10_000, args.n))
    dim = {"similarity": sim, "box": est.box, "stderr": est.stderr, "scales": est.scales,
           "counts": est.counts, "halving": ifs.halving, "seed": args.seed}
    write_json(out / "dimension.json", dim)
    print(f"m={ifs.m} ratio={ifs.ratio} similarity={sim:.6f} box={est.box:.4f} +- {est.stderr:.4f}")
    return EXIT_OK


def cmd_toy_verify(args):
    from .quadmodel import ToyConfig, toy_orbit, verify_table
    from .errors import HypothesisViolation
    from .dynamics import fmt17

    cfg = ToyConfig(tuple(_floats(args.alphas)), args.r, args.s0,
                    tuple(_ints(args.itinerary)) if args.itinerary else (1,))
    try:
        rows = verify_table(cfg, args.n)
    except HypothesisViolation as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    w = csv.writer(sys.stdout, lineterminator="\n")
    keys = ["k", "i_k", "s_k", "u_k", "bound_k", "closed_form_k"]
    w.writerow(keys)
    for r in rows:
        w.writerow([fmt17(r[k]) for k in keys])
    orb = toy_orbit(cfg, args.n)
    ok = orb.max_log_rel_error() <= 1e-12 and not orb.bound_violations()
    return EXIT_OK if ok else EXIT_VIOLATION


def _parse_x(text):
    from .numtheory import golden, sqrt2m1

    if text == "golden":
        return golden()
    if text == "sqrt2m1":
        return sqrt2m1()
    if "/" in text:
        return Fraction(text)
    from decimal import Decimal
    return Decimal(text)


def cmd_ford_table(args):
    from .dynamics import fmt17
    from .numtheory import ford_table

    try:
        x = _parse_x(args.x)
        rows = ford_table(x, args.n)
    except (ValueError, ArithmeticError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    keys = ["k", "a_k", "p_k", "q_k", "kappa_k", "ratio", "err", "err_times_q2"]
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(keys)
    for r in rows:
        w.writerow([fmt17(r[k]) for k in keys])
    return EXIT_OK if all(r["err_times_q2"] <= 1.0 for r in rows) else EXIT_VIOLATION


def cmd_gnp_check(args):
    from .geom import Circle
    from .runner import dumps_stable
    from .scenes import build_scene
    from .transport import PuncturedDomain, check_gnp

    try:
        scene = build_scene(args.scenario)
    except InvalidShapeError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    lv = scene.level(args.level)
    omega = lv.omega
    if args.hole:
        hx, hy, hr = _floats(args.hole)
        omega = PuncturedDomain(omega.curve, (hx, hy), hr)
    rep = check_gnp(lv.C, omega, args.samples)
    print(dumps_stable(rep.to_dict()), end="")
    return EXIT_OK if rep.passed else EXIT_VIOLATION


def build_parser():
    p = argparse.ArgumentParser(prog="convexdyn", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="group", required=True)

    sc = sub.add_parser("scenario").add_subparsers(dest="action", required=True)
    r = sc.add_parser("run", help="run a configured scenario")
    r.add_argument("--config", required=True)
    r.add_argument("--out", default=None)
    r.set_defaults(func=cmd_scenario_run)

    tg = sub.add_parser("tangency").add_subparsers(dest="action", required=True)
    f = tg.add_parser("fit", help="tangency report and local quadratic fit")
    f.add_argument("--scenario", default="tangent_circles")
    f.add_argument("--level", type=int, default=0)
    f.add_argument("--lambda", dest="lam", type=float, default=None)
    f.add_argument("--sigma", type=float, default=1e-2)
    f.add_argument("--g1-bound", type=float, default=1e-6)
    f.set_defaults(func=cmd_tangency_fit)

    ifs = sub.add_parser("ifs").add_subparsers(dest="action", required=True)
    s = ifs.add_parser("sample", help="chaos-game sample and dimension estimate")
    s.add_argument("--m", type=int, default=None)
    s.add_argument("--alphas", default=None, help="comma-separated branch coefficients")
    s.add_argument("--ratio", type=float, default=0.5)
    s.add_argument("--n", type=int, default=100_000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--burn-in", type=int, default=64)
    s.add_argument("--out", default="ifs_out")
    s.set_defaults(func=cmd_ifs_sample)

    toy = sub.add_parser("toy").add_subparsers(dest="action", required=True)
    v = toy.add_parser("verify", help="toy-model iteration against closed form and bound")
    v.add_argument("--alphas", default="2")
    v.add_argument("--r", type=float, default=0.4)
    v.add_argument("--s0", type=float, default=0.25)
    v.add_argument("--itinerary", default=None)
    v.add_argument("--n", type=int, default=6)
    v.set_defaults(func=cmd_toy_verify)

    ford = sub.add_parser("ford").add_subparsers(dest="action", required=True)
    t = ford.add_parser("table", help="continued-fraction and Ford-circle table")
    t.add_argument("--x", default="golden", help="golden, sqrt2m1, p/q or a decimal")
    t.add_argument("--n", type=int, default=12)
    t.set_defaults(func=cmd_ford_table)

    gnp = sub.add_parser("gnp").add_subparsers(dest="action", required=True)
    g = gnp.add_parser("check", help="sampled normal-property check")
    g.add_argument("--scenario", default="concentric")
    g.add_argument("--level", type=int, default=0)
    g.add_argument("--samples", type=int, default=256)
    g.add_argument("--hole", default=None, help="x,y,r of a disk removed from the domain")
    g.set_defaults(func=cmd_gnp_check)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConvexDynError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
