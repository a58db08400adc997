"""Print the nonnegative decomposition of each level-ell cb vector, with ratios at ell = 1, 2."""

import argparse

from veronese_blocks.confblocks import cb_vector_omega1
from veronese_blocks.core import format_rational
from veronese_blocks.veronese import jensen_vector
from veronese_blocks.verify import poscomb_decompose, proportionality_ratio


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--gmax", type=int, default=8)
    args = ap.parse_args()
    print("g,ell,cb_vector,coefficients,ratio")
    for g in range(1, args.gmax + 1):
        for ell in range(1, g + 1):
            res = poscomb_decompose(ell, g)
            cb = cb_vector_omega1(ell, g)
            ratio = proportionality_ratio(cb, jensen_vector(ell, g, method="closed").values)
            coeffs = " ".join(f"{lv}:{format_rational(c)}" for lv, c in res.coefficients.items())
            vec = " ".join(map(str, cb))
            print(f"{g},{ell},{vec},{coeffs},{'' if ratio is None else format_rational(ratio)}")


if __name__ == "__main__":
    main()
