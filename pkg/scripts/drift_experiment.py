"""Heights of nilpotent adjoint points along a destabilizing flow of metrics."""

import argparse
import csv

from heightlab import linalg as la
from heightlab.experiments import drift_suite, summarize_drift
from heightlab.hermlat import lattice_new
from heightlab.heights import drift_sequence
from heightlab.semistab import OnePS, PointInP


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=50)
    ap.add_argument("--steps", type=int, default=15)
    ap.add_argument("--base", type=int, default=2)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="drift.csv")
    args = ap.parse_args()

    e12 = drift_sequence(
        PointInP.from_adjoint_matrix([[0, 1], [0, 0]]), OnePS((1, -1)), args.base, args.steps, lattice_new(la.identity(2))
    )
    print("E12 in sl2, unit lattice:")
    for n, h in zip(e12.exponents, e12.heights):
        print(f"  n={n:<3} h={h}  ({float(h):.6f})")

    records = drift_suite(args.count, args.seed, steps=args.steps, base=args.base)
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["index", "N", "covector", "integral_certificate", "degree_constant", "decreasing_from", "constant_step_from", "step", "final_height"])
        for r in records:
            w.writerow([r.index, r.n, " ".join(map(str, r.covector)), r.integral_certificate, r.degree_constant,
                        r.decreasing_from, r.constant_step_from, r.step, r.final_height])
    s = summarize_drift(records)
    print(f"{s['count']} random nilpotent points: failures {s['failures']}, steps {s['steps']}, "
          f"integral certificates {s['integral_certificates']}")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
