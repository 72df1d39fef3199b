"""Local quadratic fits of the transition at every declared tangency."""
import argparse

from convexdyn.scenes import build_scene
from convexdyn.tangency import (angular_slope, fit_local_quadratic, scene_tangencies,
                                tangency_report)

SCENES = ["tangent_circles", "nested_ellipses", "stadium", "rounded_triangle"]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sigma", type=float, default=1e-2)
    ap.add_argument("--level", type=int, default=0)
    args = ap.parse_args()
    for name in SCENES:
        sc = build_scene(name)
        lv = sc.level(args.level)
        for i, tp in enumerate(scene_tangencies(sc, args.level)):
            rep = tangency_report(sc, args.level, i, sigma=args.sigma)
            # first-order factor predicted from the geometry of the normals
            pred = (1 + tp.d * tp.kappa_k) * (1 - tp.d / tp.R)
            slope = angular_slope(lv.C, lv.omega, tp.t)
            print(f"{name}[{i}] p=({tp.p[0]:+.4f},{tp.p[1]:+.4f}) g1={rep.g1_fit:+.6f} "
                  f"(1+d k)(1-d/R)={pred:+.6f} alpha_fit={rep.alpha_fit:+.3e} "
                  f"alpha_formula={rep.alpha_formula:.6f} dtheta/ds={slope:.4f} "
                  f"2k={2 * tp.kappa_k:.4f}")
        if hasattr(lv.C, "flat_midpoints"):
            f = fit_local_quadratic(sc, args.level, anchor_t=lv.C.flat_midpoints[0],
                                    sigma=args.sigma)
            print(f"{name}[flat] g1={f.g1:+.6f} alpha={f.alpha:+.3e}")


if __name__ == "__main__":
    main()
