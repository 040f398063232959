"""Replication studies comparing the logistic direction with the SaAUC fit.

Runs the two-marker population with and without outliers and the
ten-marker population, then prints mean (sd) test aAUC, min and max center
AUC per method.

    python3 scripts/run_replication_table.py --reps 150 --seed 1
"""

import argparse
import time

from adjauc.simgen import PopulationSpec, run_study

SETTINGS = {
    "outliers": dict(family="two_marker_outlier", pi=0.05),
    "no_outliers": dict(family="two_marker_outlier", pi=0.0),
    "ten_marker": dict(family="ten_marker"),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--reps", type=int, default=150)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--m", type=int, default=6, help="training centers per replication")
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--settings", default=",".join(SETTINGS))
    args = ap.parse_args()

    for name in args.settings.split(","):
        spec = PopulationSpec(m=args.m, seed=args.seed, **SETTINGS[name])
        t0 = time.perf_counter()
        summary = run_study(spec, args.reps, threads=args.threads)
        print(f"\n{name}: {args.reps} replications, {summary.failures} failed, {time.perf_counter() - t0:.0f}s")
        print(f"{'method':<8}{'aAUC':>18}{'min AUC':>18}{'max AUC':>18}")
        for meth in summary.methods:
            cells = [f"{summary.mean[meth][s]:.4f} ({summary.sd[meth][s]:.4f})" for s in ("aauc", "min_auc", "max_auc")]
            print(f"{meth:<8}" + "".join(f"{c:>18}" for c in cells))


if __name__ == "__main__":
    main()
