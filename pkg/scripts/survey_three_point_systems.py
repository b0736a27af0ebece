#!/usr/bin/env python3
"""Exhaustively survey all 531,441 four-map systems over a 3-point metric.

For each linear-modulus slope this prints how many systems pass the
hypothesis screen (range inclusion, weak compatibility of both pairs,
halved contractive condition), then runs the Jungck solver on every
survivor and compares against the brute-force oracle.  A second pass
counts systems satisfying the unhalved condition and confirms the
factor-2 bridge into the halved form.
"""

import argparse
import time

from mulmetric import (
    ContractiveModulus,
    DistanceTable,
    Flavor,
    brute_force_common_fixed_points,
    check_contractive_condition,
    exp_transform,
    reduce_multiplicative_system,
    solve_common_fixed_point,
    survey_systems,
)

DEFAULT = [[0, 1, 2], [1, 0, 2.5], [2, 2.5, 0]]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lambdas", default="0.25,0.5,0.75",
                    help="comma-separated halved-condition slopes")
    ap.add_argument("--unhalved-lambdas", default="0.1,0.25,0.4")
    args = ap.parse_args()

    table = DistanceTable.from_rows(DEFAULT, Flavor.ADDITIVE)
    t0 = time.perf_counter()
    survey = survey_systems(table)
    print(f"screen built in {time.perf_counter() - t0:.2f} s "
          f"({len(survey.maps) ** 4} systems)")

    for lam in (float(v) for v in args.lambdas.split(",")):
        survivors = survey.passing_halved(lam)
        mismatches = 0
        multi = 0
        for idx in survivors:
            sysm = survey.system(idx)
            oracle = brute_force_common_fixed_points(sysm)
            if len(oracle) != 1:
                multi += 1
                continue
            res = solve_common_fixed_point(sysm, ContractiveModulus.linear(lam))
            if not res.success or res.point != oracle[0]:
                mismatches += 1
        print(f"lambda = {lam:g}: {len(survivors)} survivors, "
              f"{multi} non-unique oracles, {mismatches} solver mismatches")

    mult = exp_transform(table)
    mult_survey = survey_systems(mult)
    for lam in (float(v) for v in args.unhalved_lambdas.split(",")):
        survivors = mult_survey.passing_unhalved(lam)
        broken = 0
        for idx in survivors:
            red = reduce_multiplicative_system(mult_survey.system(idx), lam)
            if not check_contractive_condition(red.system, red.modulus, halved=True).passed:
                broken += 1
        print(f"unhalved lambda = {lam:g}: {len(survivors)} satisfy condition, "
              f"{broken} fail the bridged halved check")


if __name__ == "__main__":
    main()
