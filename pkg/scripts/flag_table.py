"""Table of d, δ and A for every flag type with N up to --max-n."""

import argparse

from heightlab.flags import flag_table


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=5)
    args = ap.parse_args()
    print(f"{'N':>2}  {'type':<14}{'d':>3}{'δ':>8}  {'A':<10} printed δ")
    for n in range(2, args.max_n + 1):
        for r in flag_table(n):
            printed = "" if r.delta_printed is None else str(r.delta_printed)
            print(f"{n:>2}  {str(r.partition):<14}{r.d:>3}{r.delta:>8}  {str(r.a):<10} {printed}")


if __name__ == "__main__":
    main()
