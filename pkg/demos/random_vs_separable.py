"""Random labels vs teacher labels: how much does realizability buy?

A teacher-generated mapping always admits a zero-cost weight string.  Random
labels usually do not, so the ground truth has to come from the exhaustive
oracle (Gray-code scan of all 2^F strings).  This demo prints the oracle's
view of a few random mappings, then compares the success probability of the
dynamics on both mapping kinds at equal sizes.

Run:  python3 demos/random_vs_separable.py [--maps 60] [--runs 40]
"""

import argparse
import sys

import numpy as np

from ach.harness import CampaignConfig, run_campaign
from ach.oracle import exhaustive_min_cost
from ach.perceptron import generate_random_mapping

F_LIST = [11, 15, 19]


def oracle_peek(seed):
    print("oracle on a handful of random mappings (M = 2F):")
    print(f"{'F':>4} {'min cost':>9} {'minimizers':>11} {'share of 2^F':>13}")
    rng = np.random.default_rng(seed)
    for f in F_LIST:
        mapping = generate_random_mapping(f, 2 * f, rng)
        res = exhaustive_min_cost(mapping)
        print(f"{f:>4} {res.min_cost:>9} {res.minimizer_count:>11} "
              f"{res.minimizer_count / 2.0 ** f:>13.2e}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--l", type=int, default=5)
    ap.add_argument("--maps", type=int, default=60)
    ap.add_argument("--runs", type=int, default=40)
    ap.add_argument("--seed", type=int, default=9)
    ap.add_argument("--verbose", action="store_true")
    args = ap.parse_args()

    oracle_peek(args.seed)

    rows = {}
    for kind in ("teacher", "random"):
        cfg = CampaignConfig(f_list=F_LIST, l_list=[args.l],
                             mapping_kind=kind, runs_per_mapping=args.runs,
                             realizations_min=args.maps,
                             realizations_max=args.maps,
                             master_seed=args.seed)
        rows[kind] = run_campaign(
            cfg, log=sys.stdout if args.verbose else None).rows

    print(f"\nP_m on the {args.l}x{args.l} lattice:")
    print(f"{'F':>4} {'separable':>12} {'random':>12}")
    for rt, rr in zip(rows["teacher"], rows["random"]):
        print(f"{rt.f:>4} {rt.pm:>8.4f} +-{rt.pm_stderr:.4f} "
              f"{rr.pm:>8.4f} +-{rr.pm_stderr:.4f}")
    print("\npast the smallest F the random-label curve trails the separable "
          "one: unrealizable label noise roughens the cost landscape the "
          "imitation dynamics descends (tiny samples can still flip a point).")


if __name__ == "__main__":
    main()
