"""Check the semistable lower bound on random adjoint instances and write a CSV."""

import argparse
import csv
import time

from heightlab.experiments import summarize_theorem1, theorem1_suite


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default="theorem1_suite.csv")
    args = ap.parse_args()

    start = time.perf_counter()
    records = theorem1_suite(args.count, args.seed, workers=args.workers)
    elapsed = time.perf_counter() - start
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["index", "N", "satisfied", "height", "degree", "margin"])
        for r in records:
            w.writerow([r.index, r.n, r.satisfied, r.height, r.degree, f"{r.margin:.6f}"])
    s = summarize_theorem1(records)
    print(f"{s['count']} instances in {elapsed:.1f}s, failures {s['failures']}, smallest margin {s['min_margin']:.4f}")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
