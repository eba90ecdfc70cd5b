#!/usr/bin/env python3
"""Tabulate exact projection constants for the zero-sum hyperplane family.

For each n the hyperplane {x : sum x_i = 0} of ell_inf^n has constant
2 - 2/n; the table prints the LP-certified value next to that prediction and
the floating oracle's estimate, so a single glance confirms all three lanes
agree.
"""

import argparse
from fractions import Fraction

from projconst import (
    coordinate_sum_kernel,
    float_oracle,
    format_rational,
    projection_constant,
)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--max-dim", type=int, default=6,
                        help="largest ambient dimension (default 6)")
    parser.add_argument("--skip-oracle", action="store_true",
                        help="exact values only, no floating-point column")
    args = parser.parse_args()

    if args.max_dim < 2:
        parser.error("--max-dim must be at least 2")

    header = f"{'n':>3}  {'lambda (exact)':>15}  {'predicted 2-2/n':>16}"
    if not args.skip_oracle:
        header += f"  {'oracle':>12}  {'|err|':>9}"
    print(header)
    print("-" * len(header))
    for n in range(2, args.max_dim + 1):
        space = coordinate_sum_kernel(n)
        exact = projection_constant(space).value
        predicted = 2 - Fraction(2, n)
        line = (f"{n:>3}  {format_rational(exact):>15}  "
                f"{format_rational(predicted):>16}")
        if not args.skip_oracle:
            estimate = float_oracle(space)
            line += f"  {estimate:>12.8f}  {abs(estimate - float(exact)):>9.2e}"
        print(line)
        if exact != predicted:
            raise SystemExit(f"certified value for n={n} deviates from 2-2/n")


if __name__ == "__main__":
    main()
