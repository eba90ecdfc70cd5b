#!/usr/bin/env python3
"""Walk a zero-sum amplification schedule and certify every staged constant.

Starts from the zero-sum hyperplane of ell_inf^d (constant 2 - 2/d) and
applies the N-block zero-sum construction step by step.  Each level's
constant is certified by an exact LP solve and compared with the predicted
(2 - 2/N)^k * lambda_0.  Ambient dimension grows by a factor of N per step,
so more than one step needs a raised --budget.
"""

import argparse

from projconst import LPBudget, ad_hoc_plan, coordinate_sum_kernel, demonstrate_schedule, format_rational, projection_constant


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--base-dim", type=int, default=3,
                        help="ambient dimension of the starting hyperplane (default 3)")
    parser.add_argument("--copies", type=int, default=3,
                        help="blocks per amplification step (default 3)")
    parser.add_argument("--steps", type=int, default=1,
                        help="number of amplification steps (default 1)")
    parser.add_argument("--budget", type=str, default="12,6",
                        help="LP budget as AMBIENT,DIM (default 12,6)")
    args = parser.parse_args()

    if args.base_dim < 2:
        parser.error("--base-dim must be at least 2")
    if args.copies < 2:
        parser.error("--copies must be at least 2")
    if args.steps < 0:
        parser.error("--steps must be nonnegative")
    try:
        ambient, dim = (int(x) for x in args.budget.split(","))
    except ValueError:
        parser.error("--budget must look like 12,6")
    budget = LPBudget(max_ambient=ambient, max_dim=dim)

    base = coordinate_sum_kernel(args.base_dim)
    alpha = projection_constant(base).value
    plan = ad_hoc_plan(alpha, args.copies, args.steps)
    print(f"base: zero-sum hyperplane of ell_inf^{args.base_dim}, "
          f"lambda = {format_rational(alpha)}")
    print(f"plan: {args.steps} step(s) of {args.copies}-block amplification, "
          f"target {format_rational(plan.lambda_target)}")
    print()

    report = demonstrate_schedule(base, plan, args.steps, budget)
    print(f"{'k':>3}  {'ambient':>8}  {'expected':>10}  {'certified':>10}")
    print("-" * 38)
    print(f"{0:>3}  {args.base_dim:>8}  {format_rational(alpha):>10}  "
          f"{format_rational(report.base_lambda):>10}")
    for step in report.steps:
        computed = "---" if step.computed is None else format_rational(step.computed)
        print(f"{step.step:>3}  {step.ambient_dim:>8}  "
              f"{format_rational(step.expected):>10}  {computed:>10}")
    print()
    print(f"status: {report.status}")
    if report.truncated:
        print("the last level exceeded the LP budget; raise --budget to finish")
        raise SystemExit(5)
    if report.status != "ok":
        raise SystemExit(1)


if __name__ == "__main__":
    main()
