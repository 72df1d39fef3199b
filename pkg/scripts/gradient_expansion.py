"""Residual of the first-order return-map expansion along offset domain families."""
import argparse
import math

from convexdyn.dynamics import gradient_expansion_residual
from convexdyn.geom import Circle, Ellipse
from convexdyn.transport import ConvexDomain

FAMILIES = {
    "circle": (Circle(), lambda e: ConvexDomain(Circle((e / 2, 0.0), 1 + e))),
    "ellipse_offset": (Ellipse(2, 1), lambda e: ConvexDomain(Ellipse(2 + e, 1 + e, (e / 2, 0.0)))),
    # thickness stays O(1) here, so this is not a small-offset family
    "ellipse_in_disk": (Ellipse(2, 1), lambda e: ConvexDomain(Circle((e / 2, 0.0), 2 + e))),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--t", type=float, default=math.pi / 2)
    args = ap.parse_args()
    for name, (C, fam) in FAMILIES.items():
        checks, slope = gradient_expansion_residual(C, fam, args.t)
        print(f"{name}: slope {slope:.4f}" if slope is not None else f"{name}: residual 0")
        for c in checks:
            print(f"  eps={c.eps:8.1e} d={c.d:.6e} grad={c.grad_d:+.6e} "
                  f"disp={c.displacement:+.6e} residual={c.residual:.3e}")


if __name__ == "__main__":
    main()
