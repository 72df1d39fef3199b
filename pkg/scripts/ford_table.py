"""Convergent and Ford-circle tables with the curvature-ratio convergence."""
import argparse
import math

from convexdyn.numtheory import curvature_ratio_table, golden, sqrt2m1


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=16)
    args = ap.parse_args()
    for name, x, limit in (("golden", golden(), ((1 + math.sqrt(5)) / 2) ** 2),
                           ("sqrt2m1", sqrt2m1(), (1 + math.sqrt(2)) ** 2)):
        print(name)
        for r in curvature_ratio_table(x, args.n):
            ratio = float(r["kappa_ratio"])
            print(f"  k={r['k']:2d} ratio={ratio:.10f} |ratio-limit|={abs(ratio - limit):.3e} "
                  f"a^2={r['a_next_sq']}")


if __name__ == "__main__":
    main()
