"""Run every named scenario with its default parameters and summarize statuses."""
import argparse
import json
from pathlib import Path

from convexdyn.config import EXPERIMENTS, validate_config
from convexdyn.runner import run_scenario

NAMES = ["concentric", "eccentric_circles", "tangent_circles", "nested_ellipses",
         "stadium", "rounded_triangle"]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="runs")
    ap.add_argument("--steps", type=int, default=8)
    ap.add_argument("--only", nargs="*", default=NAMES)
    args = ap.parse_args()
    table = {}
    for name in args.only:
        cfg = validate_config({"scenario": name, "orbit": {"steps": args.steps},
                               "experiments": list(EXPERIMENTS)})
        rep = run_scenario(cfg, Path(args.out) / name)
        table[name] = {k: v["status"] for k, v in rep.experiments.items()}
        print(f"{name:18s} exit={rep.exit_code}  " +
              " ".join(f"{k}={v}" for k, v in table[name].items()))
    Path(args.out).mkdir(exist_ok=True)
    (Path(args.out) / "summary.json").write_text(json.dumps(table, indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
