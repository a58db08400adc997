"""Compare degree conventions at the walls a_J = 1 and a_J = a_[n] - 1.

Evaluates every basis curve F_1..F_g under the standard weights with
(a) the ceiling branch at both boundaries and (b) degree d at the upper
boundary, every ordering of the four parts, and reports any value that
differs from the closed form.
"""

import argparse
import math
from itertools import permutations

from veronese_blocks.core import basis_curve
from veronese_blocks.veronese import LegDegrees, intersect, jensen_closed_form, standard_weights


def sigma_upper_d(aJ, w):
    if aJ < 1:
        return 0
    if aJ >= w.total - 1:
        return w.d
    return math.ceil((aJ - 1) / (1 - w.gamma))


def degrees_with(F, w, sig):
    A = F.parts
    legs = [sig(w.weight_of(A[i]), w) for i in range(4)]
    pairs = [sig(w.weight_of(A[i] + A[3]), w) for i in range(3)]
    return LegDegrees.from_sigmas(w.d, legs, pairs)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--gmax", type=int, default=8)
    args = ap.parse_args()
    checked = mismatches = 0
    for g in range(2, args.gmax + 1):
        for ell in range(1, g):
            w = standard_weights(ell, g)
            for i in range(1, g + 1):
                expected = jensen_closed_form(ell, g, i)
                for order in permutations(range(4)):
                    F = basis_curve(2 * g + 2, i).permuted(order)
                    for label, value in (
                        ("ceil", intersect(F, w)),
                        ("upper=d", intersect(F, w, degrees_with(F, w, sigma_upper_d))),
                    ):
                        checked += 1
                        if value != expected:
                            mismatches += 1
                            print(f"ell={ell} g={g} i={i} order={order} {label}: {value} != {expected}")
    print(f"checked {checked} evaluations, {mismatches} mismatches")


if __name__ == "__main__":
    main()
