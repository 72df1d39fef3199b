"""Box-counting estimates for chaos-game samples across octave windows."""
import argparse
import math

from convexdyn.logifs import LogIFS, box_counting_dimension, chaos_game, similarity_dimension

SYSTEMS = {
    "interval": LogIFS((0.0, 1.0), 0.5),
    "cantor": LogIFS((0.0, 1.0), 1 / 3),
    "three_branch": LogIFS((0.0, 0.5, 1.0), 0.5),
}
WINDOWS = [(4, 8), (2, 12), (4, 14), (6, 12)]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=200_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    print("cantor reference", math.log(2) / math.log(3))
    for name, ifs in SYSTEMS.items():
        pts = chaos_game(ifs, args.n, args.seed).points
        cells = []
        for w in WINDOWS:
            est = box_counting_dimension(pts, w)
            cells.append(f"{w}: {est.box:.4f}+-{est.stderr:.4f}")
        print(f"{name:13s} sim={similarity_dimension(ifs.m):.4f} " + "  ".join(cells))


if __name__ == "__main__":
    main()
