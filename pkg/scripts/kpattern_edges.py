"""List where the bare k-pattern case split disagrees with the computed rank."""

import argparse
from collections import Counter

from veronese_blocks.confblocks import rank_power, zero_criterion_kpattern


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ellmax", type=int, default=6)
    ap.add_argument("--imax", type=int, default=12)
    args = ap.parse_args()
    bad = Counter()
    for ell in range(3, args.ellmax + 1):
        for k in range(2, ell):
            for i in range(args.imax + 1):
                for t in range(ell + 1):
                    raw = zero_criterion_kpattern(ell, k, i, t, raw=True)
                    if raw != (rank_power(ell, k, i, t) == 0):
                        bad[(i, t)] += 1
                        print(f"ell={ell} k={k} i={i} t={t}: raw says zero={raw}, rank={rank_power(ell, k, i, t)}")
    print(f"disagreements by (i, t): {dict(bad)}")


if __name__ == "__main__":
    main()
