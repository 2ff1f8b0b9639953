"""Write CSV data for all four figures and print an exact-vs-paper summary.

usage: python scripts/reproduce_figures.py [OUTDIR] [--tau TAU]
"""

import argparse
import csv
import math
import pathlib
import sys
from collections import defaultdict

from pulsebloch.cli import FIGURES, main


def summarize(path):
    """Mean QFI per (tau, delta, mode); unphysical points counted separately."""
    sums = defaultdict(lambda: [0.0, 0, 0])
    with open(path) as fh:
        rows = csv.DictReader(line for line in fh if not line.startswith("#"))
        for r in rows:
            key = (float(r["tau"]), float(r["delta"]), r["mode"])
            q = float(r["qfi"])
            if math.isnan(q):
                sums[key][2] += 1
            else:
                sums[key][0] += q
                sums[key][1] += 1
    return sums


def main_(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("outdir", nargs="?", default="figure_data")
    ap.add_argument("--tau", default="pi", help="evaluation time omega_q*t (default pi)")
    args = ap.parse_args(argv)
    out = pathlib.Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    for fig in sorted(FIGURES):
        path = out / f"{fig}.csv"
        code = main(["reproduce", fig, "--tau", args.tau, "--out", str(path)])
        if code:
            return code
        print(f"{fig}: {path}")
        sums = summarize(path)
        print(f"  {'tau':>7} {'delta':>5} {'exact':>8} {'paper':>8} {'unphys':>6}")
        for tau, delta in sorted({(k[0], k[1]) for k in sums}):
            if delta not in (0.0, 0.2, 0.4, 0.6, 0.8, 1.0):
                continue
            e, p = sums[(tau, delta, "exact")], sums[(tau, delta, "paper")]
            pmean = p[0] / p[1] if p[1] else float("nan")
            print(f"  {tau:7.4f} {delta:5.2f} {e[0] / e[1]:8.4f} {pmean:8.4f} {p[2]:6d}")
    return 0


if __name__ == "__main__":
    sys.exit(main_())
